#pragma once

#include "stacz/basis.hpp"

namespace stacz {

// Linear maps on two-qubit density matrices as 16x16 matrices acting on the
// column-major vectorization vec(rho)[r + 4 c] = rho(r, c).
using Superop = Eigen::Matrix<cplx, 16, 16>;
using Vec16 = Eigen::Matrix<cplx, 16, 1>;

inline Vec16 vec(const Mat4& rho) { return Eigen::Map<const Vec16>(rho.data()); }
inline Mat4 unvec(const Vec16& v) { return Eigen::Map<const Mat4>(v.data()); }

/// rho -> U rho U^dag.
inline Superop unitary_superop(const Mat4& u) {
  Superop s;
  const Mat4 uc = u.conjugate();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) s.block<4, 4>(4 * i, 4 * j) = uc(i, j) * u;
  return s;
}

/// rho -> (1 - d) rho + d Tr(rho) I/4.
inline Superop depolarizing_superop(double d) {
  Superop s = (1.0 - d) * Superop::Identity();
  const Vec16 id = vec(Mat4::Identity());
  for (int k = 0; k < 4; ++k) s.col(k + 4 * k) += (0.25 * d) * id;
  return s;
}

inline Mat4 apply(const Superop& s, const Mat4& rho) { return unvec(s * vec(rho)); }

}  // namespace stacz
