#include "fixtures.hpp"
#include "stacz/tomography.hpp"

#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <random>
#include <sstream>

using namespace stacz;

namespace {

Mat4 pure(const Eigen::Vector4cd& v) { return v * v.adjoint(); }

Superop local_depolarizing(double p) {
  // p on each qubit: rho -> (1 - 3p/4) rho + (p/4) sum_k P_k rho P_k, per qubit.
  Superop s = Superop::Zero();
  for (int m = 0; m < 16; ++m) {
    const double wa = m / 4 == 0 ? 1.0 - 0.75 * p : 0.25 * p;
    const double wb = m % 4 == 0 ? 1.0 - 0.75 * p : 0.25 * p;
    s += wa * wb * unitary_superop(pauli_product(m));
  }
  return s;
}

Mat4 random_unitary(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Mat4 a;
  for (int i = 0; i < 16; ++i) a(i / 4, i % 4) = cplx(n(rng), n(rng));
  return Eigen::HouseholderQR<Mat4>(a).householderQ();
}

}  // namespace

TEST_CASE("prepared basis") {
  const auto& b = prepared_basis();
  CHECK(b.size() == 36);
  for (const auto& s : preparation_states()) CHECK(s.norm() == doctest::Approx(1.0));
  for (const Mat4& rho : b) {
    CHECK(rho.trace().real() == doctest::Approx(1.0));
    CHECK((rho * rho - rho).norm() < 1e-12);
  }
}

TEST_CASE("state tomography") {
  const Channel id = channel_from_unitary(Mat4::Identity());
  Mat4 r00 = Mat4::Zero();
  r00(0, 0) = 1.0;
  CHECK((state_tomography(id, r00) - r00).norm() < 1e-12);

  const Mat4 plus = prepared_basis()[6 * 2 + 2];
  const Mat4 out = state_tomography(channel_from_unitary(ideal_cz()), plus);
  CHECK((out - pure(Eigen::Vector4cd(0.5, 0.5, 0.5, -0.5))).norm() < 1e-12);

  const Channel full = channel_from_superop(depolarizing_superop(1.0));
  for (const Mat4& rho : prepared_basis()) CHECK((state_tomography(full, rho) - 0.25 * Mat4::Identity()).norm() < 1e-12);

  std::mt19937_64 rng(11);
  const Mat4 noisy = state_tomography(channel_from_unitary(ideal_cz()), plus, {20000, &rng});
  CHECK((noisy - out).cwiseAbs().maxCoeff() < 0.03);
  CHECK(noisy.trace().real() == doctest::Approx(1.0));
}

TEST_CASE("process tomography") {
  SUBCASE("identity") {
    const ChiMatrix chi = process_tomography(channel_from_unitary(Mat4::Identity())).raw;
    CHECK(std::abs(chi.matrix(0, 0) - 1.0) < 1e-12);
    CHECK(chi.matrix.cwiseAbs().sum() == doctest::Approx(1.0));
  }
  SUBCASE("ideal CZ") {
    const ChiMatrix chi = process_tomography(channel_from_unitary(ideal_cz())).raw;
    const ChiMatrix ideal = ideal_cz_chi();
    CHECK((chi.matrix - ideal.matrix).cwiseAbs().maxCoeff() < 1e-12);
    const int support[4] = {0, 3, 12, 15};  // II, IZ, ZI, ZZ
    int nonzero = 0;
    for (int m = 0; m < 16; ++m)
      for (int n = 0; n < 16; ++n)
        if (std::abs(ideal.matrix(m, n)) > 1e-12) {
          ++nonzero;
          CHECK(std::abs(ideal.matrix(m, n)) == doctest::Approx(0.25));
          CHECK(std::find(std::begin(support), std::end(support), m) != std::end(support));
        }
    CHECK(nonzero == 16);
    CHECK(ideal.matrix.trace().real() == doctest::Approx(1.0));
    CHECK(process_fidelity(ideal, ideal) == doctest::Approx(1.0));
    CHECK(ideal.matrix(15, 15).real() == doctest::Approx(0.25));
    CHECK(ideal.matrix(0, 15).real() == doctest::Approx(-0.25));
  }
  SUBCASE("depolarized CZ matches the analytic composition") {
    for (double p : {0.05, 0.2}) {
      const Superop s = local_depolarizing(p) * unitary_superop(ideal_cz());
      const ChiMatrix chi = process_tomography(channel_from_superop(s)).raw;
      // Only the I/Z Kraus terms overlap with CZ: chi_II,II = (1 - p/2)^2 / 4.
      CHECK(chi.matrix(0, 0).real() == doctest::Approx(std::pow(1.0 - 0.5 * p, 2) / 4.0));
      CHECK(process_fidelity(chi, ideal_cz_chi()) == doctest::Approx(std::pow(1.0 - 0.75 * p, 2)));
      double off = 0.0;
      for (int m = 0; m < 16; ++m)
        if (m != 0 && m != 3 && m != 12 && m != 15) off += std::abs(chi.matrix(m, m));
      CHECK(off > 0.0);
      CHECK(chi.hermiticity_error() < 1e-9);
      CHECK(chi.completeness_error() < 1e-6);
    }
  }
}

TEST_CASE("linear inversion reproduces any channel on every input") {
  std::mt19937_64 rng(5);
  const Superop s = 0.6 * unitary_superop(random_unitary(rng)) + 0.4 * unitary_superop(random_unitary(rng));
  const ChiMatrix chi = process_tomography(channel_from_superop(s)).raw;
  for (const Mat4& rho : prepared_basis()) CHECK((chi.apply(rho) - stacz::apply(s, rho)).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(chi.hermiticity_error() < 1e-9);
  CHECK(chi.completeness_error() < 1e-6);
  CHECK(chi.min_eigenvalue() > -1e-8);
}

TEST_CASE("process fidelity equals the unitary overlap") {
  std::mt19937_64 rng(9);
  for (int k = 0; k < 5; ++k) {
    const Mat4 u = random_unitary(rng);
    const ChiMatrix chi = process_tomography(channel_from_unitary(u)).raw;
    const double overlap = std::norm((ideal_cz().adjoint() * u).trace()) / 16.0;
    CHECK(std::abs(process_fidelity(chi, ideal_cz_chi()) - overlap) < 1e-8);
    CHECK((chi.matrix - chi_from_unitary(u).matrix).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("projections") {
  std::mt19937_64 rng(17);
  const Superop s = local_depolarizing(0.1) * unitary_superop(ideal_cz());
  ProcessTomographyOptions opt;
  opt.shots = {300, &rng};
  opt.project_psd = true;
  const ProcessTomography noisy = process_tomography(channel_from_superop(s), opt);
  CHECK(noisy.raw.hermiticity_error() < 1e-9);
  CHECK(noisy.projected.min_eigenvalue() > -1e-8);

  const ChiMatrix tp = project_chi(noisy.raw, true);
  CHECK(tp.min_eigenvalue() > -1e-8);
  CHECK(tp.completeness_error() < 1e-6);
  CHECK(tp.hermiticity_error() < 1e-12);

  // Projection leaves a valid chi unchanged.
  const ChiMatrix exact = process_tomography(channel_from_superop(s)).raw;
  CHECK((project_chi(exact, true).matrix - exact.matrix).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("average gate fidelity") {
  CHECK(average_gate_fidelity(ideal_cz_chi(), ideal_cz_chi()) == doctest::Approx(1.0));
  const Superop s = depolarizing_superop(0.2) * unitary_superop(ideal_cz());
  const ChiMatrix chi = process_tomography(channel_from_superop(s)).raw;
  // F_P = 1 - 15 d / 16, F_avg = 1 - 3 d / 4 for two-qubit depolarizing strength d.
  CHECK(process_fidelity(chi, ideal_cz_chi()) == doctest::Approx(1.0 - 15.0 * 0.2 / 16.0));
  CHECK(average_gate_fidelity(chi, ideal_cz_chi()) == doctest::Approx(1.0 - 0.75 * 0.2));
}

TEST_CASE("STA waveform tomography without decoherence") {
  const Superop s = gate_channel(test::calibrated_gate().waveform, default_device(), false);
  const ChiMatrix chi = process_tomography(channel_from_superop(s)).raw;
  CHECK(process_fidelity(chi, ideal_cz_chi()) >= 0.999);
  CHECK(chi.hermiticity_error() < 1e-9);
  // Leakage makes the map trace-decreasing: completeness operator <= I.
  const Mat4 k = chi.completeness_operator();
  CHECK(Eigen::SelfAdjointEigenSolver<Mat4>(Mat4::Identity() - k).eigenvalues().minCoeff() > -1e-9);
}

TEST_CASE("chi export") {
  std::ostringstream j, c;
  write_chi_json(j, ideal_cz_chi());
  const auto parsed = nlohmann::json::parse(j.str());
  CHECK(parsed["real"].size() == 16);
  CHECK(parsed["imag"][0].size() == 16);
  CHECK(parsed["basis_ordering"].get<std::string>() == ChiMatrix::kOrdering);
  write_chi_magnitude_csv(c, ideal_cz_chi());
  CHECK(c.str().rfind("row,col,abs_chi\nII,II,0.25\n", 0) == 0);
}
