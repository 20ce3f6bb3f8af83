#include "stacz/dynamics.hpp"

#include "stacz/errors.hpp"
#include "stacz/lindblad.hpp"

#include <Eigen/Eigenvalues>
#include "pchip_compat.hpp"
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <functional>
#include <memory>
#include <cmath>
#include <numbers>
#include <string>

namespace stacz {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_phase(double x) {
  x = std::remainder(x, 2.0 * kPi);
  return x <= -kPi ? x + 2.0 * kPi : x;
}

}  // namespace

Mat9 idle_eigenbasis(const DeviceParams& params) {
  const Mat9 h = build_frame_h(params, params.omega_qA, params.omega_qB).matrix;
  const BlockSpectrum e = excitation_block_eigen(h);
  Mat9 v = Mat9::Zero();
  std::array<bool, kDim> taken{};
  for (int k = 0; k < kDim; ++k) {
    Eigen::Index bare = 0;
    e.vectors.col(k).cwiseAbs().maxCoeff(&bare);
    if (taken[bare])
      throw NumericalError("idle eigenstates are too hybridized to label (bare state " +
                           std::string(basis_label(static_cast<int>(bare))) + ")");
    taken[bare] = true;
    const cplx lead = e.vectors(bare, k);
    v.col(bare) = e.vectors.col(k) * (std::abs(lead) / lead);
  }
  return v;
}

Mat9 segment_propagator(const DeviceParams& params, double omega_qA, double duration) {
  const BlockSpectrum e = excitation_block_eigen(build_frame_h(params, omega_qA, params.omega_qB).matrix);
  Eigen::Matrix<cplx, kDim, 1> phases;
  for (int k = 0; k < kDim; ++k) phases(k) = std::polar(1.0, -e.energies(k) * duration);
  return e.vectors * phases.asDiagonal() * e.vectors.adjoint();
}

Mat9 VirtualZ::matrix() const {
  Eigen::Matrix<cplx, kDim, 1> d;
  for (int i = 0; i < kDim; ++i) d(i) = std::polar(1.0, phi_a * level_a(i) + phi_b * level_b(i) - global);
  return d.asDiagonal();
}

Mat9 VirtualZ::apply(const Mat9& u) const { return matrix() * u; }

VirtualZ virtual_z_phases(const Mat9& u) {
  if (std::abs(u(k01, k01)) < 0.1 || std::abs(u(k10, k10)) < 0.1)
    throw NumericalError("gate too far from diagonal for virtual-Z compensation (|<01|U|01>| = " +
                         std::to_string(std::abs(u(k01, k01))) + ", |<10|U|10>| = " +
                         std::to_string(std::abs(u(k10, k10))) + ")");
  VirtualZ z;
  z.global = std::arg(u(k00, k00));
  z.phi_b = -wrap_phase(std::arg(u(k01, k01)) - z.global);
  z.phi_a = -wrap_phase(std::arg(u(k10, k10)) - z.global);
  return z;
}

double leakage(const Mat9& u) {
  double worst = 0.0;
  for (int c : kComputational) {
    double kept = 0.0;
    for (int r : kComputational) kept += std::norm(u(r, c));
    worst = std::max(worst, 1.0 - kept);
  }
  return std::clamp(worst, 0.0, 1.0);
}

PropagationResult propagate_unitary(const Waveform& waveform, const DeviceParams& params) {
  Mat9 u = Mat9::Identity();
  for (int k = 0; k < waveform.segment_count(); ++k) {
    const double dt = waveform.segment_duration(k);
    if (dt < 0.0) throw NumericalError("waveform time axis is not increasing");
    u = segment_propagator(params, waveform.segment_omega(k), dt) * u;
  }
  const Mat9 v = idle_eigenbasis(params);
  PropagationResult r;
  r.unitary = {u, OperatorKind::unitary};
  r.dressed = {v.adjoint() * u * v, OperatorKind::unitary};
  r.duration = waveform.total_duration;
  r.leakage = leakage(r.dressed.matrix);
  if (std::abs(r.dressed.matrix(k01, k01)) >= 0.1 && std::abs(r.dressed.matrix(k10, k10)) >= 0.1) {
    const VirtualZ z = virtual_z_phases(r.dressed.matrix);
    r.phase_a = z.phi_a;
    r.phase_b = z.phi_b;
  }
  return r;
}

QutritOperator virtual_z_compensate(const Mat9& u) {
  return {virtual_z_phases(u).apply(u), OperatorKind::unitary};
}

QutritOperator virtual_z_compensate(const PropagationResult& result) {
  return virtual_z_compensate(result.dressed.matrix);
}

double conditional_phase(const Mat9& compensated) { return std::arg(compensated(k11, k11)); }

double conditional_phase_positive(const Mat9& compensated) {
  const double p = conditional_phase(compensated);
  return p <= 0.0 ? p + 2.0 * kPi : p;
}

namespace {

Mat2 subspace_relative(const DeviceParams& params, double omega_qA) {
  return subspace_h(params, omega_qA).relative();
}

Mat2 hermitian_exp2(const Mat2& h, double t) {
  Eigen::SelfAdjointEigenSolver<Mat2> es(h);
  Eigen::Vector2cd phases(std::polar(1.0, -es.eigenvalues()(0) * t),
                          std::polar(1.0, -es.eigenvalues()(1) * t));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

Mat2 propagate_subspace(const Waveform& waveform, const DeviceParams& params) {
  Mat2 u = Mat2::Identity();
  for (int k = 0; k < waveform.segment_count(); ++k)
    u = hermitian_exp2(subspace_relative(params, waveform.segment_omega(k)),
                       waveform.segment_duration(k)) *
        u;
  Eigen::SelfAdjointEigenSolver<Mat2> es(subspace_relative(params, params.omega_qA));
  Mat2 v = es.eigenvectors();
  if (std::abs(v(0, 0)) < std::abs(v(0, 1))) v.col(0).swap(v.col(1));
  for (int c = 0; c < 2; ++c) v.col(c) *= std::abs(v(c, c)) / v(c, c);
  return v.adjoint() * u * v;
}

double subspace_control_phase(const Waveform& waveform, const DeviceParams& params) {
  const double p = std::arg(propagate_subspace(waveform, params)(0, 0));
  return p <= 0.0 ? p + 2.0 * kPi : p;
}

QutritState integrate_adaptive_oracle(const Waveform& waveform, const DeviceParams& params,
                                      const QutritState& psi0, double tolerance) {
  using State = std::array<cplx, kDim>;
  namespace odeint = boost::numeric::odeint;

  State x;
  for (int i = 0; i < kDim; ++i) x[i] = psi0.amplitudes(i);
  const double end = waveform.total_duration;
  if (end <= 0.0) return psi0;

  const Mat9 coupling_part = build_frame_h(params, 0.0, params.omega_qB).matrix;
  Eigen::Matrix<double, kDim, 1> n_a;
  for (int i = 0; i < kDim; ++i) n_a(i) = level_a(i);

  std::function<double(double)> omega;
  if (waveform.tau.size() >= 4) {
    auto spline = std::make_shared<boost::math::interpolators::pchip<std::vector<double>>>(
        std::vector<double>(waveform.tau), std::vector<double>(waveform.omega_qA));
    omega = [spline](double t) { return (*spline)(t); };
  } else {
    // Linear between the (at most three) nodes.
    omega = [&waveform](double t) {
      const auto& tau = waveform.tau;
      std::size_t k = 0;
      while (k + 2 < tau.size() && t > tau[k + 1]) ++k;
      const double span = tau[k + 1] - tau[k];
      const double f = span > 0.0 ? std::clamp((t - tau[k]) / span, 0.0, 1.0) : 0.0;
      return (1.0 - f) * waveform.omega_qA[k] + f * waveform.omega_qA[k + 1];
    };
  }

  auto rhs = [&](const State& y, State& dydt, double t) {
    const double w = omega(t);
    for (int r = 0; r < kDim; ++r) {
      cplx acc = n_a(r) * w * y[r];
      for (int c = 0; c < kDim; ++c) acc += coupling_part(r, c) * y[c];
      dydt[r] = cplx(0.0, -1.0) * acc;
    }
  };

  auto stepper = odeint::make_controlled(tolerance, tolerance, odeint::runge_kutta_dopri5<State>());
  try {
    odeint::integrate_adaptive(stepper, rhs, x, 0.0, end, 1e-3);
  } catch (const std::exception& e) {
    throw NumericalError(std::string("adaptive oracle failed: ") + e.what());
  }
  QutritState out;
  for (int i = 0; i < kDim; ++i) out.amplitudes(i) = x[i];
  return out;
}

Superop gate_channel(const Waveform& waveform, const DeviceParams& params, bool decoherence) {
  const PropagationResult result = propagate_unitary(waveform, params);
  const VirtualZ z = virtual_z_phases(result.dressed.matrix);
  if (!decoherence) return unitary_superop(computational_block(z.apply(result.dressed.matrix)));

  const Mat9 v = idle_eigenbasis(params);
  const Mat9 zm = z.matrix();
  const CollapseOperators collapse = default_collapse_operators(params);
  // The map preserves adjoints, so E(|j><i|) = E(|i><j|)^dag halves the work.
  Superop s;
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i <= j; ++i) {
      Mat4 unit = Mat4::Zero();
      unit(i, j) = 1.0;
      const Mat9 in = v * embed_computational(unit) * v.adjoint();
      const Mat9 out = evolve_lindblad(waveform, params, collapse, in);
      const Mat9 dressed = zm * (v.adjoint() * out * v) * zm.adjoint();
      const Mat4 block = computational_block(dressed);
      s.col(i + 4 * j) = vec(block);
      if (i != j) s.col(j + 4 * i) = vec(Mat4(block.adjoint()));
    }
  }
  return s;
}

CalibratedGate calibrate_controlled_phase(const DeviceParams& params, double half_duration,
                                          int segments_per_half, double target_phase,
                                          int iterations) {
  CalibratedGate out;
  out.target_phase = target_phase;
  for (int it = 0;; ++it) {
    const ThetaFSolution sol = solve_theta_f(params, half_duration, out.target_phase, segments_per_half);
    out.waveform = synthesize(params, trajectory_for(params, half_duration, sol.theta_f, segments_per_half));
    out.waveform.solver_residual = sol.residual;
    const PropagationResult r = propagate_unitary(out.waveform, params);
    out.realized_phase = conditional_phase_positive(virtual_z_compensate(r).matrix);
    out.iterations = it;
    if (it >= iterations) break;
    out.target_phase += wrap_phase(target_phase - out.realized_phase);
  }
  return out;
}

}  // namespace stacz
