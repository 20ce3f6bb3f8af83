#pragma once

#include "stacz/channel.hpp"
#include "stacz/clifford.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace stacz {

/// Error model for RB sequences. Single-qubit gates are ideal unless
/// single_qubit_depolarizing > 0.
struct NoiseModel {
  std::optional<Superop> cz;               // CZ used inside Clifford compilations; nullopt = ideal
  double single_qubit_depolarizing = 0.0;  // applied to the target qubit after every single-qubit gate
  double clifford_depolarizing = 0.0;      // two-qubit depolarizing applied once per Clifford

  void validate() const;
};

/// Applies one Clifford with the noise model.
Mat4 apply_clifford(const CliffordElement& c, const NoiseModel& noise, const Mat4& rho);

/// (1 - d) rho + d Tr_q(rho) (x) I/2 on qubit q.
Mat4 single_qubit_depolarize(const Mat4& rho, int qubit, double d);

struct PowerLawFit {
  double a0 = 0.0;
  double b0 = 0.0;
  double p = 0.0;
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();  // order (a0, b0, p)

  double p_sigma() const;
};

struct RBRun {
  std::vector<int> lengths;
  std::vector<double> survival;  // mean P(|00>) per length
  std::vector<double> stddev;    // spread over the k draws
  int k = 0;
  std::uint64_t seed = 0;
  int shots = 0;
  bool interleaved = false;
  std::optional<PowerLawFit> fit;
};

struct RBOptions {
  std::vector<int> lengths{1, 5, 10, 20, 40, 80};
  int k = 40;
  std::uint64_t seed = 1;
  int shots = 0;  // per sequence; 0 = exact P(|00>)
  int threads = 1;
};

/// Seed for the draw (length_index, draw): splitmix64 of
/// seed + 0x9E3779B97F4A7C15 * (length_index * k + draw + 1). Each draw owns
/// an mt19937_64 seeded with it, so results do not depend on thread count.
std::uint64_t rb_stream_seed(std::uint64_t seed, std::size_t length_index, int draw, int k);

/// Random Clifford sequences ended by the exact inverse; records P(|00>).
RBRun rb_reference(const CliffordGroup& group, const NoiseModel& noise, const RBOptions& options);

/// As rb_reference with cz_channel inserted after every random Clifford.
RBRun rb_interleaved(const CliffordGroup& group, const NoiseModel& noise, const Superop& cz_channel,
                     const RBOptions& options);

/// Bounded fit of A0 p^m + B0 with p in (0, 1] and B0 in [0, 1].
/// Throws FitError with fewer than 4 distinct lengths or on non-convergence.
PowerLawFit fit_power_law(const std::vector<int>& lengths, const std::vector<double>& survival);
PowerLawFit fit_power_law(const RBRun& run);

/// (d - 1)/d (1 - p), d = 4.
double reference_error(double p_ref);

struct ErrorDecomposition {
  double r_cz = 0.0;
  bool consistent = true;  // false when r_cz < 0

  double cz_fidelity() const { return 1.0 - r_cz; }
};

/// r_cz = (r_ref - n_sq r_sq) / n_cz. The default counts are the averages
/// the r_ref accounting assumes; pass a compiler's own averages otherwise.
ErrorDecomposition error_decomposition(double r_ref, double r_sq, double n_sq = 8.25,
                                       double n_cz = 1.5);

/// 1 - (3/4)(1 - p_cz / p_ref). Throws ConfigError when p_ref <= 0.
double interleaved_fidelity(double p_cz, double p_ref);

void write_rb_json(std::ostream& os, const RBRun& run);
void write_rb_csv(std::ostream& os, const RBRun& run);

}  // namespace stacz
