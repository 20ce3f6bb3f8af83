// stacz: synthesize STA controlled-Z waveforms and run the virtual experiments.

#include "stacz/benchmarking.hpp"
#include "stacz/config.hpp"
#include "stacz/dynamics.hpp"
#include "stacz/errors.hpp"
#include "stacz/experiments.hpp"
#include "stacz/tomography.hpp"
#include "stacz/waveform_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace stacz;

namespace {

struct Context {
  RunConfig config;
  fs::path out;

  std::ofstream open(const std::string& name) const {
    std::ofstream f(out / name);
    if (!f) throw ConfigError("cannot write " + (out / name).string());
    return f;
  }

  void write_summary(const json& summary) const { open("summary.json") << summary.dump(2) << '\n'; }

  // Timestamps stay out of the result files so reruns are byte-identical.
  void log(const std::string& command) const {
    std::ofstream f(out / "run.log", std::ios::app);
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    f << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ") << ' ' << command << " seed=" << config.seed
      << " threads=" << config.threads << " shots=" << config.shots << '\n';
  }
};

CalibratedGate design_gate(const RunConfig& c) {
  if (c.theta_f > 0.0) {
    CalibratedGate g;
    g.waveform = synthesize(c.device, trajectory_for(c.device, c.half_duration, c.theta_f, c.segments_per_half));
    g.target_phase = g.waveform.design_phase;
    g.realized_phase = conditional_phase_positive(virtual_z_compensate(propagate_unitary(g.waveform, c.device)).matrix);
    return g;
  }
  return calibrate_controlled_phase(c.device, c.half_duration, c.segments_per_half, c.target_phase,
                                    c.calibration_iterations);
}

int cmd_synthesize(const Context& ctx) {
  const RunConfig& c = ctx.config;
  json summary;
  if (c.theta_f <= 0.0) {
    const ThetaFSolution sol = solve_theta_f(c.device, c.half_duration, c.target_phase, c.segments_per_half);
    summary["design_theta_f"] = sol.theta_f;
    summary["design_solver_residual"] = sol.residual;
  }
  const CalibratedGate gate = design_gate(c);
  const Waveform& w = gate.waveform;
  {
    std::ofstream f = ctx.open("waveform.csv");
    write_waveform_csv(f, w);
  }
  ctx.open("waveform.json") << waveform_to_json(w).dump(2) << '\n';
  if (c.resample_step > 0.0) {
    std::ofstream f = ctx.open("waveform_uniform.csv");
    write_waveform_csv(f, resample_uniform(w, c.resample_step));
  }
  summary["theta_i"] = w.spec.theta_i;
  summary["theta_f"] = w.spec.theta_f;
  summary["total_duration_ns"] = w.total_duration;
  summary["solver_residual"] = w.solver_residual;
  summary["calibrated_target_phase"] = gate.target_phase;
  summary["realized_control_phase"] = gate.realized_phase;
  summary["calibration_iterations"] = gate.iterations;
  ctx.write_summary(summary);
  std::cout << std::setprecision(6) << "theta_f          " << w.spec.theta_f << " rad\n"
            << "duration         " << w.total_duration << " ns\n"
            << "solver residual  " << w.solver_residual << " rad\n"
            << "control phase    " << gate.realized_phase << " rad\n";
  return 0;
}

int cmd_chevron(const Context& ctx) {
  const RunConfig& c = ctx.config;
  const auto freqs = default_chevron_frequencies(c.device, c.chevron_span_mhz, c.chevron_detuning_points);
  const auto times = default_chevron_times(c.chevron_t_max, c.chevron_time_points);
  const ChevronScan scan = swap_spectroscopy(c.device, freqs, times,
                                             c.chevron_model == "full" ? SwapModel::full : SwapModel::subspace,
                                             c.threads);
  {
    std::ofstream f = ctx.open("chevron.csv");
    write_chevron_csv(f, scan);
  }
  const CouplingFit fit = fit_coupling(scan);
  json summary = {{"g_over_2pi_MHz", rad_per_ns_to_mhz(fit.g)},
                  {"omega_res_over_2pi_GHz", rad_per_ns_to_ghz(fit.omega_res)},
                  {"residual_rms_MHz", rad_per_ns_to_mhz(fit.residual_rms)},
                  {"input_g_over_2pi_MHz", rad_per_ns_to_mhz(c.device.g)},
                  {"input_omega_res_over_2pi_GHz", rad_per_ns_to_ghz(resonance_frequency(c.device))}};
  std::vector<double> swap_mhz;
  for (double w : fit.swap_frequency) swap_mhz.push_back(rad_per_ns_to_mhz(w));
  summary["swap_frequency_over_2pi_MHz"] = swap_mhz;
  ctx.write_summary(summary);
  std::cout << std::setprecision(6) << "fitted g/2pi      " << rad_per_ns_to_mhz(fit.g) << " MHz\n"
            << "fitted w_res/2pi  " << std::setprecision(8) << rad_per_ns_to_ghz(fit.omega_res) << " GHz\n";
  return 0;
}

int cmd_ramsey(const Context& ctx) {
  const RunConfig& c = ctx.config;
  const CalibratedGate gate = design_gate(c);
  const auto phases = default_ramsey_phases(c.ramsey_phase_points);
  const PropagationResult r = propagate_unitary(gate.waveform, c.device);
  const Mat9 compensated = virtual_z_compensate(r).matrix;
  json summary;
  double fitted[2];
  for (int s = 0; s < 2; ++s) {
    const RamseyTrace trace = ramsey_phase_scan(compensated, static_cast<ControlState>(s), phases);
    std::ofstream f = ctx.open("ramsey_control" + std::to_string(s) + ".csv");
    write_ramsey_csv(f, trace);
    const CosineFit fit = fit_cosine_phase(trace);
    fitted[s] = fit.phase;
    summary["control" + std::to_string(s)] = {{"phase", fit.phase}, {"amplitude", fit.amplitude}, {"offset", fit.offset}};
  }
  const double diff = std::remainder(fitted[1] - fitted[0], kTwoPi);
  summary["phase_difference"] = std::abs(diff);
  summary["conditional_phase"] = conditional_phase(compensated);
  summary["dynamic_phase_a"] = r.phase_a;
  summary["dynamic_phase_b"] = r.phase_b;
  ctx.write_summary(summary);
  std::cout << std::setprecision(6) << "Ramsey phase difference  " << std::abs(diff) << " rad\n";
  return 0;
}

int cmd_qpt(const Context& ctx) {
  const RunConfig& c = ctx.config;
  const CalibratedGate gate = design_gate(c);
  const Superop s = gate_channel(gate.waveform, c.device, c.qpt_decoherence);
  std::mt19937_64 rng(c.seed);
  ProcessTomographyOptions opt;
  opt.shots = {c.shots, &rng};
  opt.project_psd = c.qpt_project;
  opt.threads = c.threads;
  const ProcessTomography qpt = process_tomography(channel_from_superop(s), opt);
  const ChiMatrix ideal = ideal_cz_chi();
  {
    std::ofstream f = ctx.open("chi.json");
    write_chi_json(f, qpt.projected);
  }
  {
    std::ofstream f = ctx.open("chi_abs.csv");
    write_chi_magnitude_csv(f, qpt.projected);
  }
  const double fp = process_fidelity(qpt.raw, ideal);
  json summary = {{"process_fidelity", fp},
                  {"process_fidelity_projected", process_fidelity(qpt.projected, ideal)},
                  {"average_gate_fidelity", average_gate_fidelity(qpt.raw, ideal)},
                  {"decoherence", c.qpt_decoherence},
                  {"duration_ns", gate.waveform.total_duration},
                  {"chi_trace", qpt.raw.matrix.trace().real()}};
  ctx.write_summary(summary);
  std::cout << std::setprecision(6) << "F_P  " << fp << '\n';
  return 0;
}

NoiseModel noise_model(const RunConfig& c, const Waveform* cz_waveform) {
  NoiseModel n;
  n.single_qubit_depolarizing = c.rb_single_qubit_error;
  n.clifford_depolarizing = c.rb_clifford_depolarizing;
  if (c.rb_cz_channel == "unitary" || c.rb_cz_channel == "lindblad")
    n.cz = gate_channel(*cz_waveform, c.device, c.rb_cz_channel == "lindblad");
  else if (c.rb_cz_channel == "depolarizing")
    n.cz = depolarizing_superop(c.rb_cz_depolarizing) * unitary_superop(ideal_cz());
  return n;
}

RBOptions rb_options(const RunConfig& c) {
  RBOptions o;
  o.lengths = c.rb_lengths;
  o.k = c.rb_k;
  o.seed = c.seed;
  o.shots = c.shots;
  o.threads = c.threads;
  return o;
}

json fit_json(const PowerLawFit& f) {
  return {{"A0", f.a0}, {"B0", f.b0}, {"p", f.p}, {"p_sigma", f.p_sigma()}};
}

int cmd_rb(const Context& ctx, bool interleaved) {
  const RunConfig& c = ctx.config;
  std::optional<CalibratedGate> gate;
  if (c.rb_cz_channel == "unitary" || c.rb_cz_channel == "lindblad") gate = design_gate(c);
  const NoiseModel noise = noise_model(c, gate ? &gate->waveform : nullptr);
  const CliffordGroup& group = CliffordGroup::instance();

  RBRun ref = rb_reference(group, noise, rb_options(c));
  ref.fit = fit_power_law(ref);
  {
    std::ofstream j = ctx.open("rb_reference.json"), f = ctx.open("rb_reference.csv");
    write_rb_json(j, ref);
    write_rb_csv(f, ref);
  }
  const double r_ref = reference_error(ref.fit->p);
  json summary = {{"reference", fit_json(*ref.fit)}, {"r_ref", r_ref}};
  std::cout << std::setprecision(6) << "p_ref  " << ref.fit->p << "  r_ref " << r_ref << '\n';

  if (interleaved) {
    const Superop cz = noise.cz ? *noise.cz : unitary_superop(ideal_cz());
    RBRun inter = rb_interleaved(group, noise, cz, rb_options(c));
    inter.fit = fit_power_law(inter);
    {
      std::ofstream j = ctx.open("rb_interleaved.json"), f = ctx.open("rb_interleaved.csv");
      write_rb_json(j, inter);
      write_rb_csv(f, inter);
    }
    const double fg = interleaved_fidelity(std::min(inter.fit->p, ref.fit->p), ref.fit->p);
    // Depolarizing strength d on one qubit has average error d / 2.
    const ErrorDecomposition dec = error_decomposition(r_ref, 0.5 * c.rb_single_qubit_error);
    summary["interleaved"] = fit_json(*inter.fit);
    summary["F_g"] = fg;
    summary["r_cz"] = dec.r_cz;
    summary["decomposition_consistent"] = dec.consistent;
    std::cout << "p_cz   " << inter.fit->p << "  F_g " << fg << "  r_CZ " << dec.r_cz << '\n';
  }
  ctx.write_summary(summary);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"STA controlled-Z gate simulator"};
  app.require_subcommand(0, 1);
  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads, shots;
  bool print_default = false;
  app.add_option("--config", config_path, "Config file (dotted key = value)");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--seed", seed, "RNG seed");
  app.add_option("--threads", threads, "Worker threads (1 = deterministic)");
  app.add_option("--shots", shots, "Shots per setting or sequence (0 = exact)");
  app.add_flag("--print-default-config", print_default, "Print the default config and exit");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"synthesize", "Solve theta_f and write the Q_A frequency waveform"},
      {"chevron", "Swap spectroscopy and coupling fit"},
      {"ramsey", "Ramsey fringes for both control states"},
      {"qpt", "Process tomography of the gate"},
      {"rb", "Reference randomized benchmarking"},
      {"rb-interleaved", "Reference and CZ-interleaved randomized benchmarking"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (print_default) {
      write_config(std::cout, RunConfig{});
      return 0;
    }
    if (app.get_subcommands().empty()) {
      std::cerr << app.help();
      return 2;
    }
    Context ctx;
    ctx.config = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (seed) ctx.config.seed = *seed;
    if (threads) ctx.config.threads = *threads;
    if (shots) ctx.config.shots = *shots;
    if (!out_dir.empty()) ctx.config.out = out_dir;
    ctx.config.validate();
    ctx.out = ctx.config.out;
    std::error_code ec;
    fs::create_directories(ctx.out, ec);
    if (ec) throw ConfigError("cannot create output directory " + ctx.out.string());

    const std::string cmd = app.get_subcommands().front()->get_name();
    ctx.log(cmd);
    if (cmd == "synthesize") return cmd_synthesize(ctx);
    if (cmd == "chevron") return cmd_chevron(ctx);
    if (cmd == "ramsey") return cmd_ramsey(ctx);
    if (cmd == "qpt") return cmd_qpt(ctx);
    if (cmd == "rb") return cmd_rb(ctx, false);
    return cmd_rb(ctx, true);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const FitError& e) {
    std::cerr << "fit error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
