#include "stacz/synth.hpp"

#include "stacz/errors.hpp"
#include "stacz/hamiltonian.hpp"

#include "pchip_compat.hpp"
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace stacz {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kPi = std::numbers::pi;

}  // namespace

void validate(const TrajectorySpec& spec) {
  if (!(spec.theta_i > 0.0 && spec.theta_i < kPi))
    throw ConfigError("trajectory.theta_i must lie in (0, pi)");
  if (!(spec.theta_f >= spec.theta_i && spec.theta_f < kPi))
    throw ConfigError("trajectory.theta_f must lie in [theta_i, pi)");
  if (!(spec.half_duration > 0.0)) throw ConfigError("trajectory.half_duration_ns must be positive");
  if (spec.segments_per_half < 100) throw ConfigError("trajectory.segments_per_half must be >= 100");
}

TrajectorySpec trajectory_for(const DeviceParams& params, double half_duration, double theta_f,
                              int segments_per_half) {
  TrajectorySpec spec;
  spec.theta_i = polar_angle(subspace_h(params, params.omega_qA).delta_d, params.g);
  spec.theta_f = theta_f;
  spec.half_duration = half_duration;
  spec.segments_per_half = segments_per_half;
  return spec;
}

namespace {

// Half-trajectory position: which half t falls in, and the local time in it.
struct HalfPosition {
  double sign;   // +1 on the way out, -1 on the way back
  double local;  // t or t - T
};

HalfPosition locate(double t, const TrajectorySpec& spec) {
  const double T = spec.half_duration;
  const double eps = 1e-12 * T;
  if (t < -eps || t > 2.0 * T + eps)
    throw NumericalError("trajectory time " + std::to_string(t) + " ns outside [0, 2T]");
  t = std::clamp(t, 0.0, 2.0 * T);
  if (t <= T) return {1.0, t};
  return {-1.0, t - T};
}

}  // namespace

double theta_dot_hanning(double t, const TrajectorySpec& spec) {
  const auto [sign, u] = locate(t, spec);
  const double T = spec.half_duration;
  return sign * (spec.theta_f - spec.theta_i) / T * (1.0 - std::cos(2.0 * kPi * u / T));
}

double theta_ddot_hanning(double t, const TrajectorySpec& spec) {
  const auto [sign, u] = locate(t, spec);
  const double T = spec.half_duration;
  return sign * (spec.theta_f - spec.theta_i) / T * (2.0 * kPi / T) * std::sin(2.0 * kPi * u / T);
}

double theta_hanning(double t, const TrajectorySpec& spec) {
  const auto [sign, u] = locate(t, spec);
  const double T = spec.half_duration;
  const double ramp = (spec.theta_f - spec.theta_i) / T * (u - T / (2.0 * kPi) * std::sin(2.0 * kPi * u / T));
  return sign > 0 ? spec.theta_i + ramp : spec.theta_f - ramp;
}

double effective_rabi(double theta_dot, double g) {
  return std::sqrt(2.0 * g * g + 0.25 * theta_dot * theta_dot);
}

double azimuth(double theta_dot, double g) {
  if (!(g > 0.0)) throw NumericalError("azimuth requires g > 0");
  return -std::atan(theta_dot / (2.0 * kSqrt2 * g));
}

double azimuth_rate(double theta_dot, double theta_ddot, double g) {
  return -theta_ddot * 2.0 * kSqrt2 * g / (8.0 * g * g + theta_dot * theta_dot);
}

Mat2 rotated_subspace_h(double delta_d, double theta_dot, double theta_ddot, double g) {
  const double omega = effective_rabi(theta_dot, g);
  Mat2 h;
  h << 0.0, omega, omega, delta_d + azimuth_rate(theta_dot, theta_ddot, g);
  return h;
}

BaseTrajectory sample_trajectory(const TrajectorySpec& spec) {
  validate(spec);
  const int n = 2 * spec.segments_per_half;
  BaseTrajectory b;
  b.dt = spec.half_duration / spec.segments_per_half;
  b.time.resize(n + 1);
  b.theta.resize(n + 1);
  b.theta_dot.resize(n + 1);
  b.theta_ddot.resize(n + 1);
  for (int m = 0; m <= n; ++m) {
    // Snap the midpoint and the end onto T and 2T exactly.
    b.time[m] = m == n ? 2.0 * spec.half_duration
                       : (m == spec.segments_per_half ? spec.half_duration : m * b.dt);
    b.theta_dot[m] = theta_dot_hanning(b.time[m], spec);
    b.theta_ddot[m] = theta_ddot_hanning(b.time[m], spec);
  }
  b.theta[0] = spec.theta_i;
  for (int m = 0; m < n; ++m)
    b.theta[m + 1] = b.theta[m] + 0.5 * b.dt * (b.theta_dot[m] + b.theta_dot[m + 1]);
  return b;
}

std::vector<RescaledSegment> rescaled_segments(const DeviceParams& params,
                                               const TrajectorySpec& spec) {
  const BaseTrajectory b = sample_trajectory(spec);
  const double pinned = kSqrt2 * params.g;
  std::vector<RescaledSegment> out;
  out.reserve(b.time.size() - 1);
  for (std::size_t m = 0; m + 1 < b.time.size(); ++m) {
    RescaledSegment s;
    s.base_dt = b.dt;
    s.h_base = rotated_subspace_h(detuning_for_angle(b.theta[m], params.g), b.theta_dot[m],
                                  b.theta_ddot[m], params.g);
    s.scale = pinned / effective_rabi(b.theta_dot[m], params.g);
    s.tau = b.dt / s.scale;
    s.h_rescaled = s.scale * s.h_base;
    out.push_back(s);
  }
  return out;
}

Waveform idle_waveform(const DeviceParams& params) {
  Waveform w;
  w.tau = {0.0};
  w.omega_qA = {params.omega_qA};
  w.device = params;
  return w;
}

Waveform rectangle_waveform(const DeviceParams& params, double omega_qA, double duration) {
  if (!(duration >= 0.0)) throw NumericalError("rectangle pulse duration must be non-negative");
  Waveform w;
  w.tau = {0.0, duration};
  w.omega_qA = {omega_qA, omega_qA};
  w.total_duration = duration;
  w.device = params;
  return w;
}

Waveform synthesize(const DeviceParams& params, const TrajectorySpec& spec) {
  validate(params);
  const BaseTrajectory b = sample_trajectory(spec);
  const double g = params.g;
  const double pinned = kSqrt2 * g;
  const double omega_res = resonance_frequency(params);
  const std::size_t nodes = b.time.size();

  std::vector<double> scale(nodes);
  Waveform w;
  w.spec = spec;
  w.device = params;
  w.omega_qA.resize(nodes);
  w.tau.resize(nodes);
  for (std::size_t m = 0; m < nodes; ++m) {
    const double th = b.theta[m];
    if (!(th > 0.0 && th < kPi))
      throw NumericalError("polar angle left (0, pi) at t = " + std::to_string(b.time[m]) +
                           " ns; tan(theta) is singular");
    scale[m] = pinned / effective_rabi(b.theta_dot[m], g);
    const double diagonal =
        detuning_for_angle(th, g) + azimuth_rate(b.theta_dot[m], b.theta_ddot[m], g);
    w.omega_qA[m] = omega_res + scale[m] * diagonal;
  }
  const double idle_error = std::abs(w.omega_qA.front() - params.omega_qA);
  if (idle_error > 1e-9)
    throw ConfigError("trajectory.theta_i does not match the device idle point (frequency off by " +
                      std::to_string(idle_error) + " rad/ns)");

  w.tau[0] = 0.0;
  for (std::size_t m = 0; m + 1 < nodes; ++m)
    w.tau[m + 1] = w.tau[m] + 0.5 * b.dt * (1.0 / scale[m] + 1.0 / scale[m + 1]);
  w.total_duration = w.tau.back();
  w.design_phase = control_phase(b.theta, b.dt, g);
  return w;
}

double trajectory_control_phase(const DeviceParams& params, const TrajectorySpec& spec) {
  const BaseTrajectory b = sample_trajectory(spec);
  return control_phase(b.theta, b.dt, params.g);
}

ThetaFSolution solve_theta_f(const DeviceParams& params, double half_duration,
                             double target_phase, int segments_per_half) {
  if (!(target_phase > 0.0 && target_phase < 2.0 * kPi))
    throw ConfigError("target phase must lie in (0, 2 pi)");
  const TrajectorySpec base = trajectory_for(params, half_duration, 0.0, segments_per_half);
  int evaluations = 0;
  auto residual = [&](double theta_f) {
    TrajectorySpec spec = base;
    spec.theta_f = theta_f;
    ++evaluations;
    return trajectory_control_phase(params, spec) - target_phase;
  };
  const double lo = base.theta_i;
  const double hi = kPi - 1e-6;
  const double f_lo = residual(lo);
  const double f_hi = residual(hi);
  if (f_lo > 0.0)
    throw NumericalError("target phase " + std::to_string(target_phase) +
                         " rad is below the idle-point phase " + std::to_string(f_lo + target_phase) +
                         " rad; no theta_f solves it");
  if (f_hi < 0.0)
    throw NumericalError("target phase " + std::to_string(target_phase) +
                         " rad is out of reach for 2T = " + std::to_string(2.0 * half_duration) +
                         " ns at this coupling");

  ThetaFSolution out;
  if (f_lo == 0.0) {
    out.theta_f = lo;
  } else {
    std::uintmax_t max_iter = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(
        residual, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(50), max_iter);
    out.theta_f = 0.5 * (a + b);
  }
  out.residual = residual(out.theta_f);
  out.phase = out.residual + target_phase;
  out.residual = std::abs(out.residual);
  out.evaluations = evaluations;
  if (out.residual > 1e-6)
    throw NumericalError("theta_f root solve stalled with residual " + std::to_string(out.residual));
  return out;
}

UniformSamples resample_uniform(const Waveform& waveform, double step) {
  if (!(step > 0.0)) throw ConfigError("resampling step must be positive");
  UniformSamples out;
  const double end = waveform.total_duration;
  if (waveform.tau.size() < 4) {
    // pchip needs four nodes; short waveforms are piecewise constant anyway.
    for (double t = 0.0; t < end; t += step) {
      out.tau.push_back(t);
      out.omega_qA.push_back(waveform.omega_qA.front());
    }
    out.tau.push_back(end);
    out.omega_qA.push_back(waveform.omega_qA.back());
    return out;
  }
  auto spline = boost::math::interpolators::pchip(std::vector<double>(waveform.tau),
                                                  std::vector<double>(waveform.omega_qA));
  const auto count = static_cast<std::size_t>(std::floor(end / step * (1.0 + 1e-12)));
  for (std::size_t k = 0; k <= count; ++k) {
    const double t = std::min(k * step, end);
    out.tau.push_back(t);
    out.omega_qA.push_back(spline(t));
  }
  if (out.tau.back() < end - 1e-12 * end) {
    out.tau.push_back(end);
    out.omega_qA.push_back(spline(end));
  }
  return out;
}

}  // namespace stacz
