#include "stacz/config.hpp"

#include "stacz/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace stacz {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  if (v == "inf" || v == "infinity") return kNoDecay;
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(x))
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  return x;
}

long long to_integer(const std::string& key, const std::string& v) {
  long long x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::string time_text(double us) {
  if (std::isinf(us)) return "inf";
  std::ostringstream s;
  s << std::setprecision(15) << us;
  return s.str();
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"device.omega_qA_over_2pi_GHz",
       [](RunConfig& c, auto& k, auto& v) { c.device.omega_qA = ghz_to_rad_per_ns(to_double(k, v)); }},
      {"device.omega_qB_over_2pi_GHz",
       [](RunConfig& c, auto& k, auto& v) { c.device.omega_qB = ghz_to_rad_per_ns(to_double(k, v)); }},
      {"device.anharmonicity_over_2pi_MHz",
       [](RunConfig& c, auto& k, auto& v) { c.device.anharmonicity = mhz_to_rad_per_ns(to_double(k, v)); }},
      {"device.g_over_2pi_MHz", [](RunConfig& c, auto& k, auto& v) { c.device.g = mhz_to_rad_per_ns(to_double(k, v)); }},
      {"device.T1_A_us", [](RunConfig& c, auto& k, auto& v) { c.device.t1_a = us_to_ns(to_double(k, v)); }},
      {"device.T1_B_us", [](RunConfig& c, auto& k, auto& v) { c.device.t1_b = us_to_ns(to_double(k, v)); }},
      {"device.T2star_A_us", [](RunConfig& c, auto& k, auto& v) { c.device.t2star_a = us_to_ns(to_double(k, v)); }},
      {"device.T2star_B_us", [](RunConfig& c, auto& k, auto& v) { c.device.t2star_b = us_to_ns(to_double(k, v)); }},
      {"trajectory.half_duration_ns", [](RunConfig& c, auto& k, auto& v) { c.half_duration = to_double(k, v); }},
      {"trajectory.segments_per_half",
       [](RunConfig& c, auto& k, auto& v) { c.segments_per_half = static_cast<int>(to_integer(k, v)); }},
      {"trajectory.target_phase_rad", [](RunConfig& c, auto& k, auto& v) { c.target_phase = to_double(k, v); }},
      {"trajectory.theta_f", [](RunConfig& c, auto& k, auto& v) { c.theta_f = v == "auto" ? 0.0 : to_double(k, v); }},
      {"trajectory.calibration_iterations",
       [](RunConfig& c, auto& k, auto& v) { c.calibration_iterations = static_cast<int>(to_integer(k, v)); }},
      {"trajectory.resample_step_ns", [](RunConfig& c, auto& k, auto& v) { c.resample_step = to_double(k, v); }},
      {"chevron.span_MHz", [](RunConfig& c, auto& k, auto& v) { c.chevron_span_mhz = to_double(k, v); }},
      {"chevron.detuning_points",
       [](RunConfig& c, auto& k, auto& v) { c.chevron_detuning_points = static_cast<int>(to_integer(k, v)); }},
      {"chevron.t_max_ns", [](RunConfig& c, auto& k, auto& v) { c.chevron_t_max = to_double(k, v); }},
      {"chevron.time_points",
       [](RunConfig& c, auto& k, auto& v) { c.chevron_time_points = static_cast<int>(to_integer(k, v)); }},
      {"chevron.model", [](RunConfig& c, auto&, auto& v) { c.chevron_model = v; }},
      {"ramsey.phase_points",
       [](RunConfig& c, auto& k, auto& v) { c.ramsey_phase_points = static_cast<int>(to_integer(k, v)); }},
      {"qpt.decoherence", [](RunConfig& c, auto& k, auto& v) { c.qpt_decoherence = to_bool(k, v); }},
      {"qpt.project", [](RunConfig& c, auto& k, auto& v) { c.qpt_project = to_bool(k, v); }},
      {"rb.lengths",
       [](RunConfig& c, auto& k, auto& v) {
         c.rb_lengths.clear();
         std::stringstream ss(v);
         std::string item;
         while (std::getline(ss, item, ',')) c.rb_lengths.push_back(static_cast<int>(to_integer(k, trim(item))));
       }},
      {"rb.k", [](RunConfig& c, auto& k, auto& v) { c.rb_k = static_cast<int>(to_integer(k, v)); }},
      {"rb.single_qubit_error", [](RunConfig& c, auto& k, auto& v) { c.rb_single_qubit_error = to_double(k, v); }},
      {"rb.clifford_depolarizing", [](RunConfig& c, auto& k, auto& v) { c.rb_clifford_depolarizing = to_double(k, v); }},
      {"rb.cz_channel", [](RunConfig& c, auto&, auto& v) { c.rb_cz_channel = v; }},
      {"rb.cz_depolarizing", [](RunConfig& c, auto& k, auto& v) { c.rb_cz_depolarizing = to_double(k, v); }},
      {"run.seed",
       [](RunConfig& c, auto& k, auto& v) {
         const long long s = to_integer(k, v);
         if (s < 0) throw ConfigError(k + ": must be non-negative");
         c.seed = static_cast<std::uint64_t>(s);
       }},
      {"run.shots", [](RunConfig& c, auto& k, auto& v) { c.shots = static_cast<int>(to_integer(k, v)); }},
      {"run.threads", [](RunConfig& c, auto& k, auto& v) { c.threads = static_cast<int>(to_integer(k, v)); }},
      {"run.out", [](RunConfig& c, auto&, auto& v) { c.out = v; }},
  };
  return table;
}

}  // namespace

void RunConfig::validate() const {
  try {
    stacz::validate(device);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("device: ") + e.what());
  }
  if (!(half_duration > 0.0)) throw ConfigError("trajectory.half_duration_ns: must be positive");
  if (segments_per_half < 100) throw ConfigError("trajectory.segments_per_half: must be >= 100");
  if (!(target_phase > 0.0)) throw ConfigError("trajectory.target_phase_rad: must be positive");
  if (theta_f < 0.0 || theta_f >= 3.14159265358979323846) throw ConfigError("trajectory.theta_f: must lie in (theta_i, pi)");
  if (calibration_iterations < 0) throw ConfigError("trajectory.calibration_iterations: must be >= 0");
  if (resample_step < 0.0) throw ConfigError("trajectory.resample_step_ns: must be >= 0");
  if (!(chevron_span_mhz > 0.0)) throw ConfigError("chevron.span_MHz: must be positive");
  if (chevron_detuning_points < 3) throw ConfigError("chevron.detuning_points: must be >= 3");
  if (!(chevron_t_max > 0.0)) throw ConfigError("chevron.t_max_ns: must be positive");
  if (chevron_time_points < 32) throw ConfigError("chevron.time_points: must be >= 32");
  if (chevron_model != "full" && chevron_model != "subspace") throw ConfigError("chevron.model: expected full or subspace");
  if (ramsey_phase_points < 8) throw ConfigError("ramsey.phase_points: must be >= 8");
  if (rb_lengths.empty()) throw ConfigError("rb.lengths: must be non-empty");
  for (int m : rb_lengths)
    if (m < 0) throw ConfigError("rb.lengths: must be non-negative");
  if (rb_k < 1) throw ConfigError("rb.k: must be >= 1");
  if (rb_single_qubit_error < 0.0 || rb_single_qubit_error > 1.0) throw ConfigError("rb.single_qubit_error: must lie in [0, 1]");
  if (rb_clifford_depolarizing < 0.0 || rb_clifford_depolarizing > 1.0)
    throw ConfigError("rb.clifford_depolarizing: must lie in [0, 1]");
  if (rb_cz_channel != "ideal" && rb_cz_channel != "unitary" && rb_cz_channel != "lindblad" &&
      rb_cz_channel != "depolarizing")
    throw ConfigError("rb.cz_channel: expected ideal, unitary, lindblad or depolarizing");
  if (rb_cz_depolarizing < 0.0 || rb_cz_depolarizing > 1.0) throw ConfigError("rb.cz_depolarizing: must lie in [0, 1]");
  if (shots < 0) throw ConfigError("run.shots: must be >= 0");
  if (threads < 1) throw ConfigError("run.threads: must be >= 1");
}

RunConfig parse_config(std::istream& is, RunConfig config) {
  std::string line;
  int number = 0;
  while (std::getline(is, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(number) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(key + ": unknown key (line " + std::to_string(number) + ")");
    if (value.empty()) throw ConfigError(key + ": missing value");
    it->second(config, key, value);
  }
  config.validate();
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  return parse_config(in);
}

void write_config(std::ostream& os, const RunConfig& c) {
  os << std::setprecision(15);
  os << "# device (GHz, MHz, us; 'inf' disables a decay channel)\n"
     << "device.omega_qA_over_2pi_GHz = " << rad_per_ns_to_ghz(c.device.omega_qA) << '\n'
     << "device.omega_qB_over_2pi_GHz = " << rad_per_ns_to_ghz(c.device.omega_qB) << '\n'
     << "device.anharmonicity_over_2pi_MHz = " << rad_per_ns_to_mhz(c.device.anharmonicity) << '\n'
     << "device.g_over_2pi_MHz = " << rad_per_ns_to_mhz(c.device.g) << '\n'
     << "device.T1_A_us = " << time_text(ns_to_us(c.device.t1_a)) << '\n'
     << "device.T1_B_us = " << time_text(ns_to_us(c.device.t1_b)) << '\n'
     << "device.T2star_A_us = " << time_text(ns_to_us(c.device.t2star_a)) << '\n'
     << "device.T2star_B_us = " << time_text(ns_to_us(c.device.t2star_b)) << "\n\n"
     << "# trajectory; theta_f = auto solves for the target phase\n"
     << "trajectory.half_duration_ns = " << c.half_duration << '\n'
     << "trajectory.segments_per_half = " << c.segments_per_half << '\n'
     << "trajectory.target_phase_rad = " << c.target_phase << '\n'
     << "trajectory.theta_f = ";
  if (c.theta_f > 0.0)
    os << c.theta_f << '\n';
  else
    os << "auto\n";
  os << "trajectory.calibration_iterations = " << c.calibration_iterations << '\n'
     << "trajectory.resample_step_ns = " << c.resample_step << "\n\n"
     << "chevron.span_MHz = " << c.chevron_span_mhz << '\n'
     << "chevron.detuning_points = " << c.chevron_detuning_points << '\n'
     << "chevron.t_max_ns = " << c.chevron_t_max << '\n'
     << "chevron.time_points = " << c.chevron_time_points << '\n'
     << "chevron.model = " << c.chevron_model << "\n\n"
     << "ramsey.phase_points = " << c.ramsey_phase_points << "\n\n"
     << "qpt.decoherence = " << (c.qpt_decoherence ? "true" : "false") << '\n'
     << "qpt.project = " << (c.qpt_project ? "true" : "false") << "\n\n"
     << "rb.lengths = ";
  for (std::size_t i = 0; i < c.rb_lengths.size(); ++i) os << (i ? "," : "") << c.rb_lengths[i];
  os << '\n'
     << "rb.k = " << c.rb_k << '\n'
     << "rb.single_qubit_error = " << c.rb_single_qubit_error << '\n'
     << "rb.clifford_depolarizing = " << c.rb_clifford_depolarizing << '\n'
     << "# ideal | unitary | lindblad | depolarizing\n"
     << "rb.cz_channel = " << c.rb_cz_channel << '\n'
     << "rb.cz_depolarizing = " << c.rb_cz_depolarizing << "\n\n"
     << "run.seed = " << c.seed << '\n'
     << "run.shots = " << c.shots << '\n'
     << "run.threads = " << c.threads << '\n'
     << "run.out = " << c.out << '\n';
}

}  // namespace stacz
