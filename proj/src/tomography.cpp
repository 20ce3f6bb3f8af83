#include "stacz/tomography.hpp"

#include "stacz/errors.hpp"
#include "stacz/parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

namespace stacz {

namespace {


const std::array<Mat2, 4>& pauli_table() {
  static const std::array<Mat2, 4> table = [] {
    std::array<Mat2, 4> p;
    const cplx i(0.0, 1.0);
    p[0] << 1, 0, 0, 1;
    p[1] << 0, 1, 1, 0;
    p[2] << 0, -i, i, 0;
    p[3] << 1, 0, 0, -1;
    return p;
  }();
  return table;
}

const std::array<Mat4, 16>& pauli_products() {
  static const std::array<Mat4, 16> table = [] {
    std::array<Mat4, 16> e;
    for (int m = 0; m < 16; ++m) e[m] = kron(pauli(m / 4), pauli(m % 4));
    return e;
  }();
  return table;
}

// Column (m, n) -> m + 16 n holds the stacked vec(E_m rho_j E_n^dag) for all 36 inputs.
const Eigen::ColPivHouseholderQR<Eigen::MatrixXcd>& design_qr() {
  static const Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr = [] {
    const auto& e = pauli_products();
    const auto& inputs = prepared_basis();
    Eigen::MatrixXcd a(36 * 16, 256);
    for (int j = 0; j < 36; ++j)
      for (int m = 0; m < 16; ++m)
        for (int n = 0; n < 16; ++n)
          a.block<16, 1>(16 * j, m + 16 * n) = vec(e[m] * inputs[j] * e[n].adjoint());
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> q(a);
    if (q.rank() != 256) throw NumericalError("process tomography design matrix is singular");
    return q;
  }();
  return qr;
}

// Choi matrix J = sum chi_mn vec(E_m) vec(E_n)^dag and back. The map is a
// scaled unitary change of basis, so Frobenius projections agree.
Superop chi_to_choi(const Superop& chi) {
  Superop w;
  for (int m = 0; m < 16; ++m) w.col(m) = vec(pauli_products()[m]);
  return w * chi * w.adjoint();
}

Superop choi_to_chi(const Superop& j) {
  Superop w;
  for (int m = 0; m < 16; ++m) w.col(m) = vec(pauli_products()[m]);
  return w.adjoint() * j * w / 16.0;
}

Superop project_psd(const Superop& m) {
  const Superop h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Superop> es(h);
  const Eigen::Matrix<double, 16, 1> ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

// Affine projection onto chi with completeness operator I, done on the Choi
// matrix: J[(r,c),(r',c')] with vec index r + 4 c; sum_r J[(r,c),(r,c')] = delta_cc'.
Superop project_trace_preserving(const Superop& chi) {
  Superop j = chi_to_choi(chi);
  Mat4 x = -Mat4::Identity();
  for (int c = 0; c < 4; ++c)
    for (int cp = 0; cp < 4; ++cp)
      for (int r = 0; r < 4; ++r) x(c, cp) += j(r + 4 * c, r + 4 * cp);
  for (int c = 0; c < 4; ++c)
    for (int cp = 0; cp < 4; ++cp)
      for (int r = 0; r < 4; ++r) j(r + 4 * c, r + 4 * cp) -= 0.25 * x(c, cp);
  return choi_to_chi(j);
}

// Outcome projector for Pauli axis (1..3) with eigenvalue sign s.
Mat2 pauli_projector(int axis, int sign) {
  return 0.5 * (Mat2::Identity() + static_cast<double>(sign) * pauli(axis));
}

}  // namespace

Channel channel_from_superop(const Superop& s) {
  return [s](const Mat4& rho) { return stacz::apply(s, rho); };
}

Channel channel_from_unitary(const Mat4& u) {
  return [u](const Mat4& rho) -> Mat4 { return u * rho * u.adjoint(); };
}

const Mat2& pauli(int index) { return pauli_table().at(static_cast<std::size_t>(index)); }

Mat4 pauli_product(int index) { return pauli_products().at(static_cast<std::size_t>(index)); }

double ChiMatrix::hermiticity_error() const { return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff(); }

Mat4 ChiMatrix::completeness_operator() const {
  const auto& e = pauli_products();
  Mat4 k = Mat4::Zero();
  for (int m = 0; m < 16; ++m)
    for (int n = 0; n < 16; ++n)
      if (matrix(m, n) != cplx(0.0)) k += matrix(m, n) * e[n].adjoint() * e[m];
  return k;
}

double ChiMatrix::completeness_error() const {
  return (completeness_operator() - Mat4::Identity()).cwiseAbs().maxCoeff();
}

double ChiMatrix::min_eigenvalue() const {
  const Superop h = 0.5 * (matrix + matrix.adjoint());
  return Eigen::SelfAdjointEigenSolver<Superop>(h, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

Mat4 ChiMatrix::apply(const Mat4& rho) const {
  const auto& e = pauli_products();
  Mat4 out = Mat4::Zero();
  for (int m = 0; m < 16; ++m)
    for (int n = 0; n < 16; ++n)
      if (matrix(m, n) != cplx(0.0)) out += matrix(m, n) * e[m] * rho * e[n].adjoint();
  return out;
}

const std::array<Eigen::Vector2cd, 6>& preparation_states() {
  static const std::array<Eigen::Vector2cd, 6> states = [] {
    const double s = 1.0 / std::sqrt(2.0);
    const cplx i(0.0, 1.0);
    std::array<Eigen::Vector2cd, 6> v;
    v[0] << 1, 0;
    v[1] << 0, 1;
    v[2] << s, s;
    v[3] << s, -s;
    v[4] << s, s * i;
    v[5] << s, -s * i;
    return v;
  }();
  return states;
}

const std::array<Mat4, 36>& prepared_basis() {
  static const std::array<Mat4, 36> basis = [] {
    std::array<Mat4, 36> b;
    const auto& s = preparation_states();
    for (int a = 0; a < 6; ++a)
      for (int c = 0; c < 6; ++c) {
        Eigen::Vector4cd psi;
        for (int x = 0; x < 2; ++x)
          for (int y = 0; y < 2; ++y) psi(2 * x + y) = s[a](x) * s[c](y);
        b[6 * a + c] = psi * psi.adjoint();
      }
    return b;
  }();
  return basis;
}

Mat4 reconstruct_state(const Mat4& output, const ShotOptions& shots) {
  std::array<double, 16> expectation{};
  for (int m = 0; m < 16; ++m) expectation[m] = (pauli_products()[m] * output).trace().real();

  if (shots.shots > 0) {
    if (shots.rng == nullptr) throw ConfigError("shot sampling requires an RNG");
    const double trace = expectation[0];
    if (!(trace > 0.0)) throw NumericalError("cannot sample a state with zero trace");
    std::array<double, 16> sum{};
    std::array<int, 16> settings{};
    for (int sa = 1; sa <= 3; ++sa)
      for (int sb = 1; sb <= 3; ++sb) {
        std::array<double, 4> prob{};
        for (int o = 0; o < 4; ++o) {
          const int ga = (o / 2) ? -1 : 1, gb = (o % 2) ? -1 : 1;
          const Mat4 proj = kron(pauli_projector(sa, ga), pauli_projector(sb, gb));
          prob[o] = std::max(0.0, (proj * output).trace().real() / trace);
        }
        std::discrete_distribution<int> outcome(prob.begin(), prob.end());
        std::array<int, 4> counts{};
        for (int k = 0; k < shots.shots; ++k) ++counts[static_cast<std::size_t>(outcome(*shots.rng))];
        double ea = 0.0, eb = 0.0, eab = 0.0;
        for (int o = 0; o < 4; ++o) {
          const double f = static_cast<double>(counts[o]) / shots.shots;
          const int ga = (o / 2) ? -1 : 1, gb = (o % 2) ? -1 : 1;
          ea += ga * f;
          eb += gb * f;
          eab += ga * gb * f;
        }
        sum[4 * sa] += ea;
        ++settings[4 * sa];
        sum[sb] += eb;
        ++settings[sb];
        sum[4 * sa + sb] += eab;
        ++settings[4 * sa + sb];
      }
    for (int m = 1; m < 16; ++m) expectation[m] = trace * sum[m] / settings[m];
  }

  Mat4 rho = Mat4::Zero();
  for (int m = 0; m < 16; ++m) rho += (0.25 * expectation[m]) * pauli_products()[m];
  return rho;
}

Mat4 state_tomography(const Channel& channel, const Mat4& input, const ShotOptions& shots) {
  return reconstruct_state(channel(input), shots);
}

ProcessTomography process_tomography(const Channel& channel, const ProcessTomographyOptions& options) {
  const auto& inputs = prepared_basis();
  std::array<Mat4, 36> outputs;
  if (options.shots.shots > 0) {
    // Sampling shares one RNG, so keep it sequential and ordered.
    for (int j = 0; j < 36; ++j) outputs[j] = state_tomography(channel, inputs[j], options.shots);
  } else {
    parallel_for(36, options.threads, [&](std::size_t j) { outputs[j] = state_tomography(channel, inputs[j]); });
  }
  Eigen::VectorXcd rhs(36 * 16);
  for (int j = 0; j < 36; ++j) rhs.segment<16>(16 * j) = vec(outputs[j]);
  const Eigen::VectorXcd x = design_qr().solve(rhs);

  ProcessTomography result;
  for (int m = 0; m < 16; ++m)
    for (int n = 0; n < 16; ++n) result.raw.matrix(m, n) = x(m + 16 * n);
  result.projected = result.raw;
  if (options.project_psd || options.trace_preserving)
    result.projected = project_chi(result.raw, options.trace_preserving);
  return result;
}

ChiMatrix project_chi(const ChiMatrix& chi, bool trace_preserving) {
  ChiMatrix out;
  if (!trace_preserving) {
    out.matrix = project_psd(chi.matrix);
    return out;
  }
  Superop x = chi.matrix, p = Superop::Zero(), q = Superop::Zero();
  for (int it = 0; it < 2000; ++it) {
    const Superop y = project_psd(x + p);
    p = x + p - y;
    const Superop next = project_trace_preserving(y + q);
    q = y + q - next;
    const double change = (next - x).cwiseAbs().maxCoeff();
    x = next;
    if (change < 1e-13) break;
  }
  out.matrix = 0.5 * (x + x.adjoint());
  return out;
}

ChiMatrix chi_from_unitary(const Mat4& u) {
  Eigen::Matrix<cplx, 16, 1> c;
  for (int m = 0; m < 16; ++m) c(m) = (pauli_products()[m] * u).trace() / 4.0;
  ChiMatrix chi;
  chi.matrix = c * c.adjoint();
  return chi;
}

Mat4 ideal_cz() { return Eigen::Vector4cd(1, 1, 1, -1).asDiagonal(); }

ChiMatrix ideal_cz_chi() { return chi_from_unitary(ideal_cz()); }

double process_fidelity(const ChiMatrix& chi, const ChiMatrix& chi_ideal) {
  return (chi.matrix * chi_ideal.matrix).trace().real();
}

double average_gate_fidelity(const ChiMatrix& chi, const ChiMatrix& chi_ideal) {
  constexpr double d = 4.0;
  // Tr E(I) = sum chi_mn Tr(E_m E_n^dag) = d^2 Tr chi.
  const double trace_term = d * chi.matrix.trace().real();
  return (d * process_fidelity(chi, chi_ideal) + trace_term / d) / (d + 1.0);
}

void write_chi_json(std::ostream& os, const ChiMatrix& chi) {
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (int m = 0; m < 16; ++m) {
    nlohmann::json rr = nlohmann::json::array(), ir = nlohmann::json::array();
    for (int n = 0; n < 16; ++n) {
      rr.push_back(chi.matrix(m, n).real());
      ir.push_back(chi.matrix(m, n).imag());
    }
    re.push_back(rr);
    im.push_back(ir);
  }
  nlohmann::json j;
  j["basis_ordering"] = ChiMatrix::kOrdering;
  j["labels"] = nlohmann::json::array();
  static const char* names = "IXYZ";
  for (int m = 0; m < 16; ++m) j["labels"].push_back(std::string{names[m / 4], names[m % 4]});
  j["real"] = re;
  j["imag"] = im;
  os << j.dump(2) << '\n';
}

void write_chi_magnitude_csv(std::ostream& os, const ChiMatrix& chi) {
  static const char* names = "IXYZ";
  os << "row,col,abs_chi\n" << std::setprecision(12);
  for (int m = 0; m < 16; ++m)
    for (int n = 0; n < 16; ++n)
      os << names[m / 4] << names[m % 4] << ',' << names[n / 4] << names[n % 4] << ','
         << std::abs(chi.matrix(m, n)) << '\n';
}

}  // namespace stacz
