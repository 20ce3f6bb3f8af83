#pragma once

#include "stacz/device.hpp"
#include "stacz/synth.hpp"

#include <json.hpp>

#include <iosfwd>

namespace stacz {

/// Device parameters in reporting units (GHz / MHz / us).
nlohmann::json device_to_json(const DeviceParams& params);
nlohmann::json trajectory_to_json(const TrajectorySpec& spec);

/// Header `tau_ns,omega_qA_over_2pi_GHz`, one row per node.
void write_waveform_csv(std::ostream& os, const Waveform& waveform);
void write_waveform_csv(std::ostream& os, const UniformSamples& samples);

/// Samples plus the device, trajectory and solver metadata.
nlohmann::json waveform_to_json(const Waveform& waveform);

}  // namespace stacz
