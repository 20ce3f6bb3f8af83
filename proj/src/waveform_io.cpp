#include "stacz/waveform_io.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

namespace stacz {

namespace {

// JSON has no infinity; an absent decay channel is written as null.
nlohmann::json time_or_null(double ns) {
  if (std::isinf(ns)) return nullptr;
  return ns_to_us(ns);
}

template <class Samples>
void write_rows(std::ostream& os, const Samples& tau, const Samples& omega) {
  os << "tau_ns,omega_qA_over_2pi_GHz\n";
  os << std::setprecision(17);
  for (std::size_t k = 0; k < tau.size(); ++k)
    os << tau[k] << ',' << rad_per_ns_to_ghz(omega[k]) << '\n';
}

}  // namespace

nlohmann::json device_to_json(const DeviceParams& p) {
  return {
      {"omega_qA_over_2pi_GHz", rad_per_ns_to_ghz(p.omega_qA)},
      {"omega_qB_over_2pi_GHz", rad_per_ns_to_ghz(p.omega_qB)},
      {"anharmonicity_over_2pi_MHz", rad_per_ns_to_mhz(p.anharmonicity)},
      {"g_over_2pi_MHz", rad_per_ns_to_mhz(p.g)},
      {"t1_A_us", time_or_null(p.t1_a)},
      {"t1_B_us", time_or_null(p.t1_b)},
      {"t2star_A_us", time_or_null(p.t2star_a)},
      {"t2star_B_us", time_or_null(p.t2star_b)},
  };
}

nlohmann::json trajectory_to_json(const TrajectorySpec& spec) {
  return {
      {"theta_i", spec.theta_i},
      {"theta_f", spec.theta_f},
      {"half_duration_ns", spec.half_duration},
      {"segments_per_half", spec.segments_per_half},
      {"window", "hanning"},
  };
}

void write_waveform_csv(std::ostream& os, const Waveform& waveform) {
  write_rows(os, waveform.tau, waveform.omega_qA);
}

void write_waveform_csv(std::ostream& os, const UniformSamples& samples) {
  write_rows(os, samples.tau, samples.omega_qA);
}

nlohmann::json waveform_to_json(const Waveform& waveform) {
  nlohmann::json samples = nlohmann::json::array();
  for (std::size_t k = 0; k < waveform.tau.size(); ++k)
    samples.push_back({waveform.tau[k], rad_per_ns_to_ghz(waveform.omega_qA[k])});
  return {
      {"columns", {"tau_ns", "omega_qA_over_2pi_GHz"}},
      {"samples", std::move(samples)},
      {"total_duration_ns", waveform.total_duration},
      {"device", device_to_json(waveform.device)},
      {"trajectory", trajectory_to_json(waveform.spec)},
      {"design_control_phase_rad", waveform.design_phase},
      {"solver_residual_rad", waveform.solver_residual},
  };
}

}  // namespace stacz
