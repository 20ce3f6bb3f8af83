#pragma once

#include "stacz/device.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace stacz {

/// Everything a CLI run needs. Text form: one `dotted.key = value` per line,
/// `#` starts a comment; device quantities in GHz / MHz / us, `inf` disables
/// a decoherence time.
struct RunConfig {
  DeviceParams device = default_device();

  double half_duration = 20.0;  // ns
  int segments_per_half = 2000;
  double target_phase = 3.14159265358979323846;
  double theta_f = 0.0;  // > 0 overrides the solve
  int calibration_iterations = 2;
  double resample_step = 0.0;  // ns; > 0 also writes a uniformly resampled CSV

  double chevron_span_mhz = 60.0;
  int chevron_detuning_points = 41;
  double chevron_t_max = 500.0;
  int chevron_time_points = 251;
  std::string chevron_model = "full";  // full | subspace

  int ramsey_phase_points = 41;

  bool qpt_decoherence = false;
  bool qpt_project = true;

  std::vector<int> rb_lengths{1, 5, 10, 20, 40, 80};
  int rb_k = 40;
  double rb_single_qubit_error = 0.0;   // per-gate depolarizing strength
  double rb_clifford_depolarizing = 0.0;
  std::string rb_cz_channel = "ideal";  // ideal | unitary | lindblad | depolarizing
  double rb_cz_depolarizing = 0.0;

  std::uint64_t seed = 1;
  int shots = 0;
  int threads = 1;
  std::string out = "out";

  /// Throws ConfigError naming the offending key.
  void validate() const;
};

/// Throws ConfigError on unknown keys, malformed values or bad syntax; the
/// message names the key (or line) at fault.
RunConfig parse_config(std::istream& is, RunConfig base = {});
RunConfig load_config(const std::string& path);

/// Defaults in the text form accepted by parse_config.
void write_config(std::ostream& os, const RunConfig& config);

}  // namespace stacz
