#pragma once

#include "stacz/basis.hpp"
#include "stacz/device.hpp"

#include <span>

namespace stacz {

enum class OperatorKind { general, hermitian, unitary };

/// A 9x9 operator on the two-qutrit space together with the property it is
/// meant to have.
struct QutritOperator {
  Mat9 matrix = Mat9::Zero();
  OperatorKind kind = OperatorKind::general;

  /// Hermitian: max |M - M^dag| <= 1e-12. Unitary: ||M^dag M - I||_2 <= 1e-10.
  bool satisfies_kind(double tol = -1.0) const;
  /// Largest |<i|M|j>| with i, j in different excitation-number blocks.
  double block_leak() const;
};

struct QutritState {
  Vec9 amplitudes = Vec9::Zero();

  static QutritState basis(int index);
  double norm() const { return amplitudes.norm(); }
};

/// diag(0, omega_q, 2 omega_q + anharmonicity).
Mat3 build_single_qubit_h(double omega_q, double anharmonicity);

/// g (J_A^dag J_B + J_A J_B^dag). Requires g >= 0.
QutritOperator build_coupling(double g);

/// Lab-frame H_qA(omega_qA_now) + H_qB + H_c.
QutritOperator build_system_h(const DeviceParams& params, double omega_qA_now);

/// build_system_h minus frame_omega * (n_A + n_B). The total excitation number
/// commutes with H, so this is an exact change of frame.
QutritOperator build_frame_h(const DeviceParams& params, double omega_qA_now, double frame_omega);

/// Eigendecomposition of an excitation-conserving hermitian operator, solved
/// one excitation block at a time so degenerate levels in different blocks
/// never mix. Columns of `vectors` sit inside their block.
struct BlockSpectrum {
  Eigen::Matrix<double, kDim, 1> energies = Eigen::Matrix<double, kDim, 1>::Zero();
  Mat9 vectors = Mat9::Zero();
};
BlockSpectrum excitation_block_eigen(const Mat9& h);

/// Two-level model of {|11>, |20>}:
///   H = reference_energy * I + [[0, offdiag], [offdiag, delta_d]].
struct SubspaceHamiltonian {
  double delta_d = 0.0;
  double offdiag = 0.0;
  double reference_energy = 0.0;

  /// Matrix relative to reference_energy.
  Mat2 relative() const;
  /// Splitting of the two eigenvalues.
  double splitting() const;
};

SubspaceHamiltonian subspace_h(const DeviceParams& params, double omega_qA_now);

/// atan2(2 sqrt2 g, delta_d) in (0, pi). Requires g > 0.
double polar_angle(double delta_d, double g);

/// Inverse of polar_angle: delta_d = 2 sqrt2 g / tan(theta).
double detuning_for_angle(double theta, double g);

/// Trapezoid quadrature of sqrt2 g tan(theta/2) over uniformly spaced samples.
/// Throws NumericalError if a sample leaves (0, pi).
double control_phase(std::span<const double> theta, double dt, double g);

}  // namespace stacz
