#pragma once

#include "stacz/basis.hpp"
#include "stacz/device.hpp"

#include <vector>

namespace stacz {

enum class Window { hanning };

/// Reference trajectory theta(t): a window-shaped ramp theta_i -> theta_f over
/// [0, T] and its mirror image back to theta_i over [T, 2T].
struct TrajectorySpec {
  double theta_i = 0.0;
  double theta_f = 0.0;
  double half_duration = 20.0;  // T, ns
  int segments_per_half = 2000;
  Window window = Window::hanning;
};

/// Throws ConfigError. theta_f == theta_i is accepted (flat trajectory).
void validate(const TrajectorySpec& spec);

/// Spec starting from the device idle point: theta_i = polar_angle(delta_d(idle), g).
TrajectorySpec trajectory_for(const DeviceParams& params, double half_duration, double theta_f,
                              int segments_per_half = 2000);

double theta_dot_hanning(double t, const TrajectorySpec& spec);
double theta_ddot_hanning(double t, const TrajectorySpec& spec);
/// Closed-form integral of theta_dot_hanning.
double theta_hanning(double t, const TrajectorySpec& spec);

/// Magnitude theta_dot / 2 of the imaginary |11>-|20> coupling that cancels
/// non-adiabatic transitions.
inline double counter_diabatic_offdiag(double theta_dot) { return 0.5 * theta_dot; }

/// sqrt(2 g^2 + theta_dot^2 / 4).
double effective_rabi(double theta_dot, double g);

/// Phase of the complex coupling sqrt2 g + i theta_dot/2, removed by the
/// frame rotation: tan(phi) = -theta_dot / (2 sqrt2 g).
double azimuth(double theta_dot, double g);

/// d(azimuth)/dt = -theta_ddot 2 sqrt2 g / (8 g^2 + theta_dot^2).
double azimuth_rate(double theta_dot, double theta_ddot, double g);

/// [[0, Omega], [Omega, delta_d + phi_dot]]: the reference + counter-diabatic
/// subspace Hamiltonian in the frame where its coupling is real.
Mat2 rotated_subspace_h(double delta_d, double theta_dot, double theta_ddot, double g);

/// Reference trajectory sampled on the uniform base grid t_m = m dt,
/// m = 0..2N. theta is integrated from theta_dot by the trapezoid rule.
struct BaseTrajectory {
  double dt = 0.0;
  std::vector<double> time;
  std::vector<double> theta;
  std::vector<double> theta_dot;
  std::vector<double> theta_ddot;
};

BaseTrajectory sample_trajectory(const TrajectorySpec& spec);

/// One base segment before and after time rescaling. The rescaled
/// Hamiltonian has its coupling pinned at sqrt2 g:
///   h_rescaled = scale * h_base,  tau = dt / scale,  scale = sqrt2 g / Omega.
struct RescaledSegment {
  double base_dt = 0.0;
  double scale = 1.0;
  double tau = 0.0;
  Mat2 h_base;
  Mat2 h_rescaled;
};

/// Segments sampled at the left node t_m = m dt, m = 0..2N-1.
std::vector<RescaledSegment> rescaled_segments(const DeviceParams& params,
                                               const TrajectorySpec& spec);

/// Q_A frequency command on the rescaled time axis. Nodes (tau_k, omega_qA_k),
/// k = 0..2N, bound 2N piecewise-constant segments; segment k holds the mean of
/// its two nodes for tau_{k+1} - tau_k.
struct Waveform {
  std::vector<double> tau;
  std::vector<double> omega_qA;
  double total_duration = 0.0;
  TrajectorySpec spec;
  DeviceParams device;
  double design_phase = 0.0;    // base-time control phase of the trajectory
  double solver_residual = 0.0;  // |design_phase - target| when theta_f was solved

  int segment_count() const { return static_cast<int>(tau.size()) - 1; }
  double segment_duration(int k) const { return tau[k + 1] - tau[k]; }
  double segment_omega(int k) const { return 0.5 * (omega_qA[k] + omega_qA[k + 1]); }
};

/// Empty waveform parked at the idle point (duration zero).
Waveform idle_waveform(const DeviceParams& params);

/// Rectangle pulse: Q_A held at omega_qA for duration ns.
Waveform rectangle_waveform(const DeviceParams& params, double omega_qA, double duration);

Waveform synthesize(const DeviceParams& params, const TrajectorySpec& spec);

/// Control phase of the full trajectory on the base time grid. By
/// segment-propagator invariance this is also the phase the rescaled
/// waveform realizes in the two-level model.
double trajectory_control_phase(const DeviceParams& params, const TrajectorySpec& spec);

struct ThetaFSolution {
  double theta_f = 0.0;
  double phase = 0.0;
  double residual = 0.0;
  int evaluations = 0;
};

/// Root of theta_f -> trajectory_control_phase - target_phase on
/// (theta_i, pi - 1e-6). Throws NumericalError when the bracket holds no root.
ThetaFSolution solve_theta_f(const DeviceParams& params, double half_duration,
                             double target_phase, int segments_per_half = 2000);

/// Monotone cubic (PCHIP) resampling onto tau = 0, step, 2 step, ... plus the
/// final node.
struct UniformSamples {
  std::vector<double> tau;
  std::vector<double> omega_qA;
};
UniformSamples resample_uniform(const Waveform& waveform, double step);

}  // namespace stacz
