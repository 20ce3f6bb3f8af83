#include "stacz/least_squares.hpp"

#include <cmath>

namespace stacz {

namespace {

Eigen::VectorXd clamp_to(const Eigen::VectorXd& x, const LeastSquaresOptions& o) {
  Eigen::VectorXd y = x;
  if (o.lower.size() == x.size()) y = y.cwiseMax(o.lower);
  if (o.upper.size() == x.size()) y = y.cwiseMin(o.upper);
  return y;
}

Eigen::MatrixXd jacobian(const ResidualFunction& f, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& fx, const LeastSquaresOptions& o) {
  Eigen::MatrixXd j(fx.size(), x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = 1e-7 * std::max(std::abs(x(i)), 1e-3);
    Eigen::VectorXd up = x, down = x;
    up(i) += h;
    down(i) -= h;
    const bool can_up = o.upper.size() != x.size() || up(i) <= o.upper(i);
    const bool can_down = o.lower.size() != x.size() || down(i) >= o.lower(i);
    if (can_up && can_down)
      j.col(i) = (f(up) - f(down)) / (2.0 * h);
    else if (can_up)
      j.col(i) = (f(up) - fx) / h;
    else
      j.col(i) = (fx - f(down)) / h;
  }
  return j;
}

}  // namespace

LeastSquaresResult levenberg_marquardt(const ResidualFunction& residuals, Eigen::VectorXd x0,
                                       const LeastSquaresOptions& options) {
  LeastSquaresResult out;
  Eigen::VectorXd x = clamp_to(x0, options);
  Eigen::VectorXd r = residuals(x);
  double ssr = r.squaredNorm();
  double lambda = 1e-3;
  Eigen::MatrixXd j = jacobian(residuals, x, r, options);

  for (out.iterations = 0; out.iterations < options.max_iterations; ++out.iterations) {
    const Eigen::MatrixXd jtj = j.transpose() * j;
    const Eigen::VectorXd grad = j.transpose() * r;
    if (grad.cwiseAbs().maxCoeff() <= options.tolerance * (1.0 + ssr) || ssr == 0.0) {
      out.converged = true;
      break;
    }
    bool accepted = false;
    bool stalled = false;
    while (!accepted) {
      Eigen::MatrixXd a = jtj;
      for (Eigen::Index i = 0; i < a.rows(); ++i) a(i, i) += lambda * std::max(jtj(i, i), 1e-300);
      const Eigen::VectorXd step = a.ldlt().solve(-grad);
      const Eigen::VectorXd trial = clamp_to(x + step, options);
      const Eigen::VectorXd r_trial = residuals(trial);
      const double ssr_trial = r_trial.squaredNorm();
      if (std::isfinite(ssr_trial) && ssr_trial <= ssr) {
        const double drop = ssr - ssr_trial;
        const double moved = (trial - x).norm();
        x = trial;
        r = r_trial;
        ssr = ssr_trial;
        lambda = std::max(lambda / 10.0, 1e-12);
        accepted = true;
        if (drop <= options.tolerance * ssr || moved <= options.tolerance * (x.norm() + 1e-300))
          stalled = true;
      } else {
        lambda *= 10.0;
        if (lambda > 1e16) {
          stalled = true;
          break;
        }
      }
    }
    j = jacobian(residuals, x, r, options);
    if (stalled) {
      out.converged = true;
      ++out.iterations;
      break;
    }
  }

  out.params = x;
  out.ssr = ssr;
  const Eigen::Index dof = r.size() - x.size();
  const double s2 = dof > 0 ? ssr / static_cast<double>(dof) : 0.0;
  const Eigen::MatrixXd jtj = j.transpose() * j;
  out.covariance = s2 * jtj.completeOrthogonalDecomposition().pseudoInverse();
  return out;
}

}  // namespace stacz
