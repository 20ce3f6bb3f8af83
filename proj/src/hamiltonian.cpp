#include "stacz/hamiltonian.hpp"

#include "stacz/errors.hpp"

#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>
#include <vector>
#include <numbers>
#include <string>

namespace stacz {

bool QutritOperator::satisfies_kind(double tol) const {
  switch (kind) {
    case OperatorKind::general:
      return true;
    case OperatorKind::hermitian: {
      const double t = tol < 0.0 ? 1e-12 : tol;
      return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff() <= t;
    }
    case OperatorKind::unitary: {
      const double t = tol < 0.0 ? 1e-10 : tol;
      const Mat9 d = matrix.adjoint() * matrix - Mat9::Identity();
      return Eigen::JacobiSVD<Mat9>(d).singularValues()(0) <= t;
    }
  }
  return false;
}

double QutritOperator::block_leak() const {
  double worst = 0.0;
  for (int r = 0; r < kDim; ++r)
    for (int c = 0; c < kDim; ++c)
      if (excitation(r) != excitation(c)) worst = std::max(worst, std::abs(matrix(r, c)));
  return worst;
}

QutritState QutritState::basis(int index) {
  QutritState s;
  s.amplitudes(index) = 1.0;
  return s;
}

Mat3 build_single_qubit_h(double omega_q, double anharmonicity) {
  Mat3 h = Mat3::Zero();
  h(1, 1) = omega_q;
  h(2, 2) = 2.0 * omega_q + anharmonicity;
  return h;
}

QutritOperator build_coupling(double g) {
  if (g < 0.0) throw NumericalError("coupling strength must be non-negative");
  const Mat3 j = lowering_operator();
  const Mat3 jd = j.adjoint();
  return {g * (kron(jd, j) + kron(j, jd)), OperatorKind::hermitian};
}

QutritOperator build_system_h(const DeviceParams& params, double omega_qA_now) {
  const Mat3 id = Mat3::Identity();
  Mat9 h = kron(build_single_qubit_h(omega_qA_now, params.anharmonicity), id) +
           kron(id, build_single_qubit_h(params.omega_qB, params.anharmonicity)) +
           build_coupling(params.g).matrix;
  return {h, OperatorKind::hermitian};
}

QutritOperator build_frame_h(const DeviceParams& params, double omega_qA_now, double frame_omega) {
  QutritOperator h = build_system_h(params, omega_qA_now);
  for (int i = 0; i < kDim; ++i) h.matrix(i, i) -= frame_omega * excitation(i);
  return h;
}

BlockSpectrum excitation_block_eigen(const Mat9& h) {
  static const std::array<std::vector<int>, 2 * kLevels - 1> blocks = [] {
    std::array<std::vector<int>, 2 * kLevels - 1> b;
    for (int i = 0; i < kDim; ++i) b[excitation(i)].push_back(i);
    return b;
  }();
  BlockSpectrum out;
  for (const auto& idx : blocks) {
    const int n = static_cast<int>(idx.size());
    Eigen::Matrix3cd sub = Eigen::Matrix3cd::Zero();
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) sub(r, c) = h(idx[r], idx[c]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sub.topLeftCorner(n, n));
    for (int k = 0; k < n; ++k) {
      out.energies(idx[k]) = es.eigenvalues()(k);
      for (int r = 0; r < n; ++r) out.vectors(idx[r], idx[k]) = es.eigenvectors()(r, k);
    }
  }
  return out;
}

Mat2 SubspaceHamiltonian::relative() const {
  Mat2 m;
  m << 0.0, offdiag, offdiag, delta_d;
  return m;
}

double SubspaceHamiltonian::splitting() const {
  return std::sqrt(delta_d * delta_d + 4.0 * offdiag * offdiag);
}

SubspaceHamiltonian subspace_h(const DeviceParams& params, double omega_qA_now) {
  SubspaceHamiltonian h;
  h.delta_d = omega_qA_now - params.omega_qB + params.anharmonicity;
  h.offdiag = std::numbers::sqrt2 * params.g;
  h.reference_energy = omega_qA_now + params.omega_qB;
  return h;
}

double polar_angle(double delta_d, double g) {
  if (!(g > 0.0)) throw NumericalError("polar_angle requires g > 0");
  return std::atan2(2.0 * std::numbers::sqrt2 * g, delta_d);
}

double detuning_for_angle(double theta, double g) {
  return 2.0 * std::numbers::sqrt2 * g / std::tan(theta);
}

double control_phase(std::span<const double> theta, double dt, double g) {
  if (theta.size() < 2) return 0.0;
  const double coupling = std::numbers::sqrt2 * g;
  double sum = 0.0;
  for (std::size_t k = 0; k < theta.size(); ++k) {
    const double th = theta[k];
    if (!(th > 0.0 && th < std::numbers::pi))
      throw NumericalError("polar angle sample " + std::to_string(k) + " = " +
                           std::to_string(th) + " outside (0, pi)");
    const double w = (k == 0 || k + 1 == theta.size()) ? 0.5 : 1.0;
    sum += w * std::tan(0.5 * th);
  }
  return coupling * dt * sum;
}

}  // namespace stacz
