#include "stacz/lindblad.hpp"

#include "stacz/errors.hpp"
#include "stacz/hamiltonian.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace stacz {

DensityMatrix DensityMatrix::pure(const Vec9& psi) { return {psi * psi.adjoint()}; }

double DensityMatrix::min_eigenvalue() const {
  const Mat9 h = 0.5 * (rho + rho.adjoint());
  return Eigen::SelfAdjointEigenSolver<Mat9>(h, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

void DensityMatrix::validate() const {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-8)
    throw NumericalError("density matrix is not hermitian");
  if (std::abs(rho.trace() - 1.0) > 1e-8) throw NumericalError("density matrix trace is not 1");
  if (min_eigenvalue() < -1e-8) throw NumericalError("density matrix has a negative eigenvalue");
}

CollapseOperators default_collapse_operators(const DeviceParams& params) {
  CollapseOperators c;
  const Mat3 id = Mat3::Identity();
  const Mat3 j = lowering_operator();
  const Mat3 n = number_operator();
  auto add = [&](double t1, double t2star, bool on_a, const char* name) {
    auto lift = [&](const Mat3& m) { return on_a ? kron(m, id) : kron(id, m); };
    if (std::isfinite(t1)) c.ops.push_back(std::sqrt(1.0 / t1) * lift(j));
    if (std::isfinite(t2star)) {
      const double relax = std::isfinite(t1) ? 1.0 / (2.0 * t1) : 0.0;
      const double dephasing_rate = 1.0 / t2star - relax;  // 1 / T_phi
      if (dephasing_rate < -1e-15)
        throw NumericalError(std::string("pure dephasing time of ") + name +
                             " is negative (T2* > 2 T1)");
      if (dephasing_rate > 0.0) c.ops.push_back(std::sqrt(2.0 * dephasing_rate) * lift(n));
    }
  };
  add(params.t1_a, params.t2star_a, true, "Q_A");
  add(params.t1_b, params.t2star_b, false, "Q_B");
  return c;
}

Mat9 evolve_lindblad(const Waveform& waveform, const DeviceParams& params,
                     const CollapseOperators& collapse, const Mat9& x,
                     const LindbladOptions& options) {
  if (!(options.max_step > 0.0)) throw NumericalError("Lindblad step must be positive");
  Mat9 rho = x;
  using Diag = Eigen::Matrix<cplx, kDim, 1>;

  for (int k = 0; k < waveform.segment_count(); ++k) {
    const double duration = waveform.segment_duration(k);
    if (duration <= 0.0) continue;
    const BlockSpectrum spec =
        excitation_block_eigen(build_frame_h(params, waveform.segment_omega(k), params.omega_qB).matrix);
    const Mat9& w = spec.vectors;

    // Everything below lives in the segment eigenbasis, interaction picture.
    Mat9 r = w.adjoint() * rho * w;
    if (!collapse.ops.empty()) {
      std::vector<Mat9> ls;
      Mat9 loss = Mat9::Zero();  // sum of L^dag L
      for (const Mat9& l : collapse.ops) {
        ls.push_back(w.adjoint() * l * w);
        loss += ls.back().adjoint() * ls.back();
      }
      auto dissipator = [&](double s, const Mat9& y) {
        Diag ph;
        for (int a = 0; a < kDim; ++a) ph(a) = std::polar(1.0, spec.energies(a) * s);
        const auto rot = [&](const Mat9& m) -> Mat9 {
          return ph.asDiagonal() * m * ph.conjugate().asDiagonal();
        };
        const Mat9 a = rot(loss);
        Mat9 out = -0.5 * (a * y + y * a);
        for (const Mat9& l : ls) {
          const Mat9 lt = rot(l);
          out.noalias() += lt * y * lt.adjoint();
        }
        return out;
      };
      const int steps = static_cast<int>(std::ceil(duration / options.max_step - 1e-9));
      const double h = duration / steps;
      for (int n = 0; n < steps; ++n) {
        const double s = n * h;
        const Mat9 k1 = dissipator(s, r);
        const Mat9 k2 = dissipator(s + 0.5 * h, r + 0.5 * h * k1);
        const Mat9 k3 = dissipator(s + 0.5 * h, r + 0.5 * h * k2);
        const Mat9 k4 = dissipator(s + h, r + h * k3);
        r += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
    }
    Diag ph;
    for (int a = 0; a < kDim; ++a) ph(a) = std::polar(1.0, -spec.energies(a) * duration);
    r = ph.asDiagonal() * r * ph.conjugate().asDiagonal();
    rho = w * r * w.adjoint();
  }
  return rho;
}

DensityMatrix propagate_lindblad(const Waveform& waveform, const DeviceParams& params,
                                 const DensityMatrix& rho0, const LindbladOptions& options) {
  rho0.validate();
  const CollapseOperators collapse = default_collapse_operators(params);
  return {evolve_lindblad(waveform, params, collapse, rho0.rho, options)};
}

}  // namespace stacz
