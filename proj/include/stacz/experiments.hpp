#pragma once

#include "stacz/device.hpp"
#include "stacz/hamiltonian.hpp"
#include "stacz/synth.hpp"

#include <iosfwd>
#include <span>
#include <vector>

namespace stacz {

// ---- swap spectroscopy -----------------------------------------------------

enum class SwapModel {
  full,      // nine-level system, includes |02>
  subspace,  // {|11>, |20>} only
};

/// P(|11>) after a rectangle detuning pulse, rows = Q_A frequencies,
/// columns = hold times.
struct ChevronScan {
  std::vector<double> omega_qA;  // rad/ns
  std::vector<double> times;     // ns
  Eigen::MatrixXd p11;
};

/// Detunings span +-60 MHz around resonance in 41 points.
std::vector<double> default_chevron_frequencies(const DeviceParams& params, double span_mhz = 60.0,
                                                int points = 41);
/// Hold times 0..500 ns in 251 points.
std::vector<double> default_chevron_times(double t_max = 500.0, int points = 251);

ChevronScan swap_spectroscopy(const DeviceParams& params, std::span<const double> omega_qA,
                              std::span<const double> times, SwapModel model = SwapModel::full,
                              int threads = 1);

/// Dominant non-zero frequency (rad/ns) of a uniformly sampled trace: mean
/// removed, zero-padded to 4x, DFT peak refined by a parabola through the
/// peak bin and its neighbours. Needs >= 32 samples and >= 2 periods.
double extract_swap_frequency(std::span<const double> trace, double dt);

/// Bin width (rad/ns) of the padded transform used above.
double swap_frequency_bin_width(std::size_t samples, double dt);

struct CouplingFit {
  double g = 0.0;
  double omega_res = 0.0;
  double residual_rms = 0.0;           // rad/ns
  std::vector<double> swap_frequency;  // extracted, one per scan row
};

/// Least-squares fit of sqrt(8 g^2 + (omega_qA - omega_res)^2) to the swap
/// frequencies of every row. Throws FitError when the scan does not bracket
/// the resonance or the fit fails.
CouplingFit fit_coupling(const ChevronScan& scan);

void write_chevron_csv(std::ostream& os, const ChevronScan& scan);

// ---- Ramsey fringes --------------------------------------------------------

enum class ControlState { ground = 0, excited = 1 };

struct RamseyTrace {
  std::vector<double> phase;  // rad
  std::vector<double> p1;     // P(Q_A = 1)
  ControlState control = ControlState::ground;
};

/// n phases uniformly over [0, 2 pi).
std::vector<double> default_ramsey_phases(int points = 41);

/// Q_B prepared in `control`; ideal pi/2 on Q_A; `gate`; pi/2 on Q_A with the
/// swept phase; P(Q_A = 1) summed over Q_B levels. The gate acts in the same
/// basis as the pulses (use the dressed unitary for waveforms).
RamseyTrace ramsey_phase_scan(const Mat9& gate, ControlState control, std::span<const double> phases);

/// Convenience wrapper: propagates the waveform, optionally applies the
/// virtual-Z compensation, and scans.
RamseyTrace ramsey_phase_scan(const DeviceParams& params, const Waveform& waveform,
                              ControlState control, bool compensated,
                              std::span<const double> phases);

struct CosineFit {
  double phase = 0.0;  // (-pi, pi]
  double amplitude = 0.0;
  double offset = 0.0;
};

/// Fits A cos(phase - phi0) + C. Throws FitError when A < 0.05 or the phase
/// grid has fewer than 8 samples or does not cover a full turn.
CosineFit fit_cosine_phase(const RamseyTrace& trace);

void write_ramsey_csv(std::ostream& os, const RamseyTrace& trace);

}  // namespace stacz
