#pragma once

#include "stacz/channel.hpp"
#include "stacz/hamiltonian.hpp"
#include "stacz/synth.hpp"

namespace stacz {

// Propagation frame: both qutrits rotate at omega_qB, i.e. H - omega_qB (n_A + n_B).
// The total excitation number commutes with H, so this differs from the lab
// frame only by the separable phase exp(-i omega_qB N t), which virtual-Z
// compensation absorbs.

/// Dressed computational basis: eigenvectors of the idle Hamiltonian. Column i
/// is the eigenvector with the largest overlap on bare state i, phased so that
/// overlap is real positive.
Mat9 idle_eigenbasis(const DeviceParams& params);

/// exp(-i H duration) for the frame Hamiltonian at a fixed Q_A frequency.
Mat9 segment_propagator(const DeviceParams& params, double omega_qA, double duration);

/// Single-qubit Z corrections exp(i phi_a n_A) exp(i phi_b n_B) and a global
/// phase that make <00|U|00>, <01|U|01>, <10|U|10> real positive.
struct VirtualZ {
  double phi_a = 0.0;
  double phi_b = 0.0;
  double global = 0.0;

  Mat9 apply(const Mat9& u) const;
  Mat9 matrix() const;
};

/// Throws NumericalError if |<01|U|01>| or |<10|U|10>| < 0.1.
VirtualZ virtual_z_phases(const Mat9& u);

struct PropagationResult {
  QutritOperator unitary;  // bare basis, propagation frame
  QutritOperator dressed;  // idle eigenbasis
  double duration = 0.0;
  double leakage = 0.0;    // dressed basis
  double phase_a = 0.0;    // dynamic phase removed from Q_A (= VirtualZ::phi_a)
  double phase_b = 0.0;
};

/// Product of piecewise-constant segment propagators over the waveform.
PropagationResult propagate_unitary(const Waveform& waveform, const DeviceParams& params);

/// Max over the four computational inputs of the final population outside
/// the computational subspace.
double leakage(const Mat9& u);

/// Dressed unitary with the single-qubit dynamic phases removed.
QutritOperator virtual_z_compensate(const PropagationResult& result);
QutritOperator virtual_z_compensate(const Mat9& u);

/// arg <11|U|11> of a compensated unitary, in (-pi, pi].
double conditional_phase(const Mat9& compensated);

/// Same as conditional_phase but in (0, 2 pi].
double conditional_phase_positive(const Mat9& compensated);

/// Two-level {|11>, |20>} propagation relative to the |11> reference energy
/// omega_qA + omega_qB. The returned operator is expressed in the idle
/// eigenbasis of the two-level model.
Mat2 propagate_subspace(const Waveform& waveform, const DeviceParams& params);

/// Phase of the dressed |11> after two-level propagation.
double subspace_control_phase(const Waveform& waveform, const DeviceParams& params);

/// Adaptive Dormand-Prince integration of the Schrodinger equation with
/// omega_qA(tau) interpolated through the waveform nodes by monotone cubics.
/// Test oracle for propagate_unitary. Throws NumericalError on step underflow.
QutritState integrate_adaptive_oracle(const Waveform& waveform, const DeviceParams& params,
                                      const QutritState& psi0, double tolerance = 1e-12);

/// Computational-subspace gate map in the idle eigenbasis after virtual-Z
/// compensation. Without decoherence it is the unitary block U rho U^dag
/// (trace-decreasing under leakage); with decoherence it comes from Lindblad
/// evolution of the sixteen matrix units.
Superop gate_channel(const Waveform& waveform, const DeviceParams& params, bool decoherence);

struct CalibratedGate {
  Waveform waveform;
  double target_phase = 0.0;    // design target handed to solve_theta_f
  double realized_phase = 0.0;  // conditional phase after the last iteration
  int iterations = 0;
};

/// Synthesizes a controlled-phase waveform and corrects its design target by
/// the measured conditional-phase error, the simulated counterpart of a Ramsey
/// phase calibration. iterations = 0 returns the uncorrected design.
CalibratedGate calibrate_controlled_phase(const DeviceParams& params, double half_duration,
                                          int segments_per_half, double target_phase,
                                          int iterations = 2);

}  // namespace stacz
