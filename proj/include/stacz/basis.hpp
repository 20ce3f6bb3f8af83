#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <string_view>

namespace stacz {

using cplx = std::complex<double>;

inline constexpr int kLevels = 3;
inline constexpr int kDim = kLevels * kLevels;

using Mat2 = Eigen::Matrix2cd;
using Mat3 = Eigen::Matrix3cd;
using Mat4 = Eigen::Matrix4cd;
using Mat9 = Eigen::Matrix<cplx, kDim, kDim>;
using Vec9 = Eigen::Matrix<cplx, kDim, 1>;

// Two-qutrit product basis |a b>, qutrit A first, qutrit B varying fastest:
//   0:|00> 1:|01> 2:|02> 3:|10> 4:|11> 5:|12> 6:|20> 7:|21> 8:|22>
// Every module indexes states through these helpers.
constexpr int basis_index(int a, int b) { return kLevels * a + b; }
constexpr int level_a(int i) { return i / kLevels; }
constexpr int level_b(int i) { return i % kLevels; }
constexpr int excitation(int i) { return level_a(i) + level_b(i); }

inline constexpr int k00 = basis_index(0, 0);
inline constexpr int k01 = basis_index(0, 1);
inline constexpr int k02 = basis_index(0, 2);
inline constexpr int k10 = basis_index(1, 0);
inline constexpr int k11 = basis_index(1, 1);
inline constexpr int k20 = basis_index(2, 0);

// Computational subspace in two-qubit order |00>,|01>,|10>,|11> (A major).
inline constexpr std::array<int, 4> kComputational = {k00, k01, k10, k11};

std::string_view basis_label(int i);

inline Mat9 kron(const Mat3& a, const Mat3& b) {
  Mat9 out;
  for (int i = 0; i < kLevels; ++i)
    for (int j = 0; j < kLevels; ++j)
      out.block<kLevels, kLevels>(kLevels * i, kLevels * j) = a(i, j) * b;
  return out;
}

inline Mat4 kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Mat4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

/// Restriction of a 9x9 operator to the computational subspace.
inline Mat4 computational_block(const Mat9& m) {
  Mat4 out;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out(r, c) = m(kComputational[r], kComputational[c]);
  return out;
}

/// Embeds a 4x4 operator on the computational subspace into the 9x9 space (zero elsewhere).
inline Mat9 embed_computational(const Mat4& m) {
  Mat9 out = Mat9::Zero();
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out(kComputational[r], kComputational[c]) = m(r, c);
  return out;
}

// Level-number operator diag(0, 1, 2) on one qutrit.
inline Mat3 number_operator() { return Eigen::Vector3cd(0.0, 1.0, 2.0).asDiagonal(); }

// Lowering operator J = |0><1| + sqrt(2)|1><2|.
inline Mat3 lowering_operator() {
  Mat3 j = Mat3::Zero();
  j(0, 1) = 1.0;
  j(1, 2) = std::sqrt(2.0);
  return j;
}

}  // namespace stacz
