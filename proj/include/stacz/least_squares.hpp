#pragma once

#include <Eigen/Dense>

#include <functional>

namespace stacz {

using ResidualFunction = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct LeastSquaresOptions {
  int max_iterations = 500;
  double tolerance = 1e-14;
  // Box constraints; empty means unbounded.
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

struct LeastSquaresResult {
  Eigen::VectorXd params;
  Eigen::MatrixXd covariance;  // s^2 (J^T J)^+, s^2 = ssr / (n - p)
  double ssr = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Levenberg-Marquardt with Marquardt diagonal scaling and central-difference
/// Jacobians. Steps are projected onto the bounds.
LeastSquaresResult levenberg_marquardt(const ResidualFunction& residuals, Eigen::VectorXd x0,
                                       const LeastSquaresOptions& options = {});

}  // namespace stacz
