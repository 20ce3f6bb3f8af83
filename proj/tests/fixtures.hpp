#pragma once

#include "stacz/dynamics.hpp"
#include "stacz/synth.hpp"

#include <numbers>

namespace stacz::test {

inline constexpr double kPi = std::numbers::pi;

/// Waveform from the plain theta_f solve for a pi control phase, 2T = 40 ns.
inline const Waveform& design_waveform() {
  static const Waveform w = [] {
    const DeviceParams p = default_device();
    const ThetaFSolution s = solve_theta_f(p, 20.0, kPi);
    return synthesize(p, trajectory_for(p, 20.0, s.theta_f));
  }();
  return w;
}

/// Same waveform after the simulated Ramsey phase calibration.
inline const CalibratedGate& calibrated_gate() {
  static const CalibratedGate g = calibrate_controlled_phase(default_device(), 20.0, 2000, kPi);
  return g;
}

inline double op_norm(const Eigen::MatrixXcd& m) {
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues()(0);
}

}  // namespace stacz::test
