#pragma once

#include "stacz/basis.hpp"
#include "stacz/device.hpp"
#include "stacz/synth.hpp"

#include <vector>

namespace stacz {

struct DensityMatrix {
  Mat9 rho = Mat9::Zero();

  static DensityMatrix pure(const Vec9& psi);
  double trace() const { return rho.trace().real(); }
  double min_eigenvalue() const;
  /// Throws NumericalError unless hermitian, unit trace and PSD within 1e-8.
  void validate() const;
};

/// Collapse operators of the open-system model. All decoherence modelling
/// is decided in default_collapse_operators; alternatives only need to
/// produce a different list.
struct CollapseOperators {
  std::vector<Mat9> ops;
};

/// Per qutrit: relaxation sqrt(1/T1) J (the 2->1 rate picks up the factor 2
/// from J) and pure dephasing sqrt(2/T_phi) n with 1/T_phi = 1/T2* - 1/(2 T1),
/// which makes the 0-1 coherence decay as exp(-t/T2*). Infinite times drop the
/// operator. Throws NumericalError if T_phi <= 0.
CollapseOperators default_collapse_operators(const DeviceParams& params);

struct LindbladOptions {
  double max_step = 0.01;  // ns
};

/// Evolves rho0 (bare basis, propagation frame of dynamics.hpp) under the
/// waveform with the default collapse operators.
DensityMatrix propagate_lindblad(const Waveform& waveform, const DeviceParams& params,
                                 const DensityMatrix& rho0, const LindbladOptions& options = {});

/// Linear Lindblad evolution of an arbitrary operator. Within each
/// piecewise-constant segment the coherent part is applied exactly in the
/// segment's eigenbasis and the dissipator is integrated with classical RK4
/// in that interaction picture.
Mat9 evolve_lindblad(const Waveform& waveform, const DeviceParams& params,
                     const CollapseOperators& collapse, const Mat9& x,
                     const LindbladOptions& options = {});

}  // namespace stacz
