#pragma once

#include "stacz/channel.hpp"

#include <array>
#include <functional>
#include <iosfwd>
#include <random>

namespace stacz {

/// Map on two-qubit (unnormalized) density matrices.
using Channel = std::function<Mat4(const Mat4&)>;

Channel channel_from_superop(const Superop& s);
Channel channel_from_unitary(const Mat4& u);

/// I, sigma_x, sigma_y, sigma_z.
const Mat2& pauli(int index);
/// pauli(index / 4) (x) pauli(index % 4), Q_A major.
Mat4 pauli_product(int index);

/// Process matrix over the sixteen unnormalized Pauli products E_m:
///   E(rho) = sum_mn chi(m, n) E_m rho E_n^dag.
/// With this normalisation a unitary process has Tr chi = 1.
struct ChiMatrix {
  static constexpr const char* kOrdering =
      "index = 4 a + b, a: Q_A Pauli, b: Q_B Pauli, Pauli order I,x,y,z";

  Superop matrix = Superop::Zero();

  double hermiticity_error() const;
  /// Max |sum_mn chi_mn E_n^dag E_m - I|.
  double completeness_error() const;
  double min_eigenvalue() const;
  /// sum_mn chi_mn E_n^dag E_m; equals I for trace-preserving processes and
  /// is <= I under leakage.
  Mat4 completeness_operator() const;
  Mat4 apply(const Mat4& rho) const;
};

/// The 36 inputs |s_A> (x) |s_B>, s in {|0>, |1>, |+>, |->, |+i>, |-i>}.
const std::array<Mat4, 36>& prepared_basis();
/// Single-qubit input states in the order above.
const std::array<Eigen::Vector2cd, 6>& preparation_states();

struct ShotOptions {
  int shots = 0;  // per measurement setting; 0 = exact expectation values
  std::mt19937_64* rng = nullptr;
};

/// Reconstructs rho from the sixteen Pauli expectation values of the output
/// (the identity term keeps the trace, so leakage shows up as trace loss).
/// With shots, each of the nine x/y/z setting pairs is sampled
/// multinomially.
Mat4 state_tomography(const Channel& channel, const Mat4& input, const ShotOptions& shots = {});
Mat4 reconstruct_state(const Mat4& output, const ShotOptions& shots = {});

struct ProcessTomographyOptions {
  ShotOptions shots;
  bool project_psd = false;
  /// Also enforce completeness (only meaningful for leak-free processes).
  bool trace_preserving = false;
  int threads = 1;
};

struct ProcessTomography {
  ChiMatrix raw;        // linear inversion
  ChiMatrix projected;  // equals raw unless a projection was requested
};

/// Linear inversion of the 36 tomographed outputs.
ProcessTomography process_tomography(const Channel& channel,
                                     const ProcessTomographyOptions& options = {});

/// Nearest (Frobenius) PSD chi; with trace_preserving, nearest PSD chi with
/// completeness operator I, via Dykstra alternating projections.
ChiMatrix project_chi(const ChiMatrix& chi, bool trace_preserving);

ChiMatrix chi_from_unitary(const Mat4& u);
ChiMatrix ideal_cz_chi();
Mat4 ideal_cz();

/// Re Tr(chi chi_ideal).
double process_fidelity(const ChiMatrix& chi, const ChiMatrix& chi_ideal);

/// (d F_P + Tr E(I) / d) / (d + 1) with d = 4; reduces to the usual formula
/// for trace-preserving maps.
double average_gate_fidelity(const ChiMatrix& chi, const ChiMatrix& chi_ideal);

void write_chi_json(std::ostream& os, const ChiMatrix& chi);
void write_chi_magnitude_csv(std::ostream& os, const ChiMatrix& chi);

}  // namespace stacz
