#include "stacz/experiments.hpp"

#include "stacz/dynamics.hpp"
#include "stacz/errors.hpp"
#include "stacz/least_squares.hpp"
#include "stacz/parallel.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <algorithm>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

namespace stacz {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kPadFactor = 4;

}  // namespace

std::vector<double> default_chevron_frequencies(const DeviceParams& params, double span_mhz,
                                                int points) {
  if (points < 2) throw ConfigError("chevron.detuning_points must be >= 2");
  const double center = resonance_frequency(params);
  const double span = mhz_to_rad_per_ns(span_mhz);
  std::vector<double> out(points);
  for (int i = 0; i < points; ++i) out[i] = center - span + 2.0 * span * i / (points - 1);
  return out;
}

std::vector<double> default_chevron_times(double t_max, int points) {
  if (points < 2 || !(t_max > 0.0)) throw ConfigError("chevron time grid must have >= 2 points");
  std::vector<double> out(points);
  for (int i = 0; i < points; ++i) out[i] = t_max * i / (points - 1);
  return out;
}

ChevronScan swap_spectroscopy(const DeviceParams& params, std::span<const double> omega_qA,
                              std::span<const double> times, SwapModel model, int threads) {
  if (omega_qA.empty() || times.empty()) throw ConfigError("chevron grids must be non-empty");
  ChevronScan scan;
  scan.omega_qA.assign(omega_qA.begin(), omega_qA.end());
  scan.times.assign(times.begin(), times.end());
  scan.p11.resize(static_cast<Eigen::Index>(omega_qA.size()), static_cast<Eigen::Index>(times.size()));

  parallel_for(omega_qA.size(), threads, [&](std::size_t row) {
    // |<11| exp(-iHt) |11>|^2 = |sum_k w_k exp(-i E_k t)|^2, w_k = |<11|k>|^2.
    std::vector<double> energies, weights;
    if (model == SwapModel::full) {
      const BlockSpectrum s =
          excitation_block_eigen(build_frame_h(params, omega_qA[row], params.omega_qB).matrix);
      for (int k = 0; k < kDim; ++k) {
        const double w = std::norm(s.vectors(k11, k));
        if (w > 0.0) {
          energies.push_back(s.energies(k));
          weights.push_back(w);
        }
      }
    } else {
      Eigen::SelfAdjointEigenSolver<Mat2> es(subspace_h(params, omega_qA[row]).relative());
      for (int k = 0; k < 2; ++k) {
        energies.push_back(es.eigenvalues()(k));
        weights.push_back(std::norm(es.eigenvectors()(0, k)));
      }
    }
    for (std::size_t c = 0; c < times.size(); ++c) {
      cplx amp = 0.0;
      for (std::size_t k = 0; k < energies.size(); ++k)
        amp += weights[k] * std::polar(1.0, -energies[k] * times[c]);
      scan.p11(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(c)) =
          std::clamp(std::norm(amp), 0.0, 1.0);
    }
  });
  return scan;
}

double swap_frequency_bin_width(std::size_t samples, double dt) {
  return 2.0 * kPi / (static_cast<double>(kPadFactor * samples) * dt);
}

double extract_swap_frequency(std::span<const double> trace, double dt) {
  const std::size_t n = trace.size();
  if (n < 32) throw FitError("swap-frequency extraction needs at least 32 samples");
  if (!(dt > 0.0)) throw FitError("sample spacing must be positive");
  double mean = 0.0;
  for (double v : trace) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : trace) var += (v - mean) * (v - mean);
  if (std::sqrt(var / static_cast<double>(n)) < 1e-9)
    throw FitError("trace is flat; no oscillation to extract");

  const std::size_t m = kPadFactor * n;
  std::vector<cplx> padded(m, 0.0);
  for (std::size_t k = 0; k < n; ++k) padded[k] = trace[k] - mean;
  std::vector<cplx> spectrum;
  Eigen::FFT<double> fft;
  fft.fwd(spectrum, padded);

  std::vector<double> mag(m / 2 + 1);
  for (std::size_t k = 0; k < mag.size(); ++k) mag[k] = std::abs(spectrum[k]);
  std::size_t peak = 1;
  for (std::size_t k = 2; k + 1 < mag.size(); ++k)
    if (mag[k] > mag[peak]) peak = k;
  double offset = 0.0;
  if (peak + 1 < mag.size()) {
    const double a = mag[peak - 1], b = mag[peak], c = mag[peak + 1];
    const double denom = a - 2.0 * b + c;
    if (denom < 0.0) offset = std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
  }
  const double omega = (static_cast<double>(peak) + offset) * swap_frequency_bin_width(n, dt);
  const double periods = omega * dt * static_cast<double>(n - 1) / (2.0 * kPi);
  if (periods < 2.0)
    throw FitError("trace covers " + std::to_string(periods) + " oscillation periods; need >= 2");
  return omega;
}

CouplingFit fit_coupling(const ChevronScan& scan) {
  const std::size_t rows = scan.omega_qA.size();
  if (rows < 3) throw FitError("coupling fit needs at least three detunings");
  if (scan.times.size() < 2) throw FitError("chevron has no time axis");
  const double dt = scan.times[1] - scan.times[0];

  CouplingFit fit;
  fit.swap_frequency.resize(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<double> trace(scan.times.size());
    for (std::size_t c = 0; c < trace.size(); ++c)
      trace[c] = scan.p11(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    fit.swap_frequency[r] = extract_swap_frequency(trace, dt);
  }

  std::size_t vertex = 0;
  double lo = scan.omega_qA.front(), hi = scan.omega_qA.front();
  for (std::size_t r = 0; r < rows; ++r) {
    if (fit.swap_frequency[r] < fit.swap_frequency[vertex]) vertex = r;
    lo = std::min(lo, scan.omega_qA[r]);
    hi = std::max(hi, scan.omega_qA[r]);
  }
  const double w0 = scan.omega_qA[vertex];
  if (!(w0 > lo && w0 < hi)) throw FitError("scan does not span both sides of the resonance");

  const Eigen::Map<const Eigen::VectorXd> omega(scan.omega_qA.data(), static_cast<Eigen::Index>(rows));
  const Eigen::Map<const Eigen::VectorXd> measured(fit.swap_frequency.data(),
                                                   static_cast<Eigen::Index>(rows));
  auto residuals = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    const Eigen::ArrayXd d = omega.array() - x(1);
    return (8.0 * x(0) * x(0) + d.square()).sqrt().matrix() - measured;
  };
  Eigen::VectorXd x0(2);
  x0 << fit.swap_frequency[vertex] / (2.0 * std::numbers::sqrt2), w0;
  LeastSquaresOptions opts;
  opts.lower = Eigen::Vector2d(1e-9, lo);
  opts.upper = Eigen::Vector2d(std::numeric_limits<double>::infinity(), hi);
  const LeastSquaresResult r = levenberg_marquardt(residuals, x0, opts);
  if (!r.converged || !r.params.allFinite()) throw FitError("swap-frequency fit did not converge");
  fit.g = r.params(0);
  fit.omega_res = r.params(1);
  fit.residual_rms = std::sqrt(r.ssr / static_cast<double>(rows));
  return fit;
}

void write_chevron_csv(std::ostream& os, const ChevronScan& scan) {
  os << "omega_qA_GHz,t_ns,P11\n" << std::setprecision(12);
  for (std::size_t r = 0; r < scan.omega_qA.size(); ++r)
    for (std::size_t c = 0; c < scan.times.size(); ++c)
      os << rad_per_ns_to_ghz(scan.omega_qA[r]) << ',' << scan.times[c] << ','
         << scan.p11(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) << '\n';
}

std::vector<double> default_ramsey_phases(int points) {
  if (points < 8) throw ConfigError("ramsey.phase_points must be >= 8");
  std::vector<double> out(points);
  for (int i = 0; i < points; ++i) out[i] = 2.0 * kPi * i / points;
  return out;
}

namespace {

// pi/2 rotation about cos(phase) X + sin(phase) Y on the 0-1 transition of Q_A.
Mat9 half_pi_pulse_a(double phase) {
  Mat3 r = Mat3::Identity();
  const double s = 1.0 / std::numbers::sqrt2;
  r(0, 0) = s;
  r(1, 1) = s;
  r(0, 1) = cplx(0.0, -s) * std::polar(1.0, -phase);
  r(1, 0) = cplx(0.0, -s) * std::polar(1.0, phase);
  return kron(r, Mat3::Identity());
}

}  // namespace

RamseyTrace ramsey_phase_scan(const Mat9& gate, ControlState control, std::span<const double> phases) {
  RamseyTrace trace;
  trace.control = control;
  trace.phase.assign(phases.begin(), phases.end());
  trace.p1.reserve(phases.size());
  const Vec9 mid = gate * half_pi_pulse_a(0.0) * QutritState::basis(basis_index(0, static_cast<int>(control))).amplitudes;
  for (double phase : phases) {
    const Vec9 psi = half_pi_pulse_a(phase) * mid;
    double p = 0.0;
    for (int b = 0; b < kLevels; ++b) p += std::norm(psi(basis_index(1, b)));
    trace.p1.push_back(std::clamp(p, 0.0, 1.0));
  }
  return trace;
}

RamseyTrace ramsey_phase_scan(const DeviceParams& params, const Waveform& waveform,
                              ControlState control, bool compensated,
                              std::span<const double> phases) {
  const PropagationResult r = propagate_unitary(waveform, params);
  const Mat9 gate = compensated ? virtual_z_compensate(r).matrix : r.dressed.matrix;
  return ramsey_phase_scan(gate, control, phases);
}

CosineFit fit_cosine_phase(const RamseyTrace& trace) {
  const std::size_t n = trace.phase.size();
  if (n < 8 || trace.p1.size() != n) throw FitError("cosine fit needs at least 8 phase samples");
  const auto [mn, mx] = std::minmax_element(trace.phase.begin(), trace.phase.end());
  if (*mx - *mn < 2.0 * kPi * (1.0 - 1.0 / static_cast<double>(n)) - 1e-9)
    throw FitError("Ramsey phases do not cover a full turn");
  // A cos(x - phi0) + C = a cos x + b sin x + C: linear in (a, b, C).
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd y(n);
  for (std::size_t i = 0; i < n; ++i) {
    design(i, 0) = std::cos(trace.phase[i]);
    design(i, 1) = std::sin(trace.phase[i]);
    design(i, 2) = 1.0;
    y(i) = trace.p1[i];
  }
  const Eigen::Vector3d c = design.colPivHouseholderQr().solve(y);
  CosineFit fit;
  fit.amplitude = std::hypot(c(0), c(1));
  fit.offset = c(2);
  if (fit.amplitude < 0.05)
    throw FitError("Ramsey contrast " + std::to_string(fit.amplitude) + " is below 0.05");
  fit.phase = std::atan2(c(1), c(0));
  if (fit.phase <= -kPi) fit.phase += 2.0 * kPi;
  return fit;
}

void write_ramsey_csv(std::ostream& os, const RamseyTrace& trace) {
  os << "phase_rad,P1\n" << std::setprecision(15);
  for (std::size_t i = 0; i < trace.phase.size(); ++i) os << trace.phase[i] << ',' << trace.p1[i] << '\n';
}

}  // namespace stacz
