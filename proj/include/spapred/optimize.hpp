#pragma once

#include <Eigen/Core>

#include <functional>

namespace spapred {

/// Returns f(x); fills *grad when grad is non-null.
using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd* grad)>;

struct MinimizeOptions {
  int max_iterations = 500;
  double gradient_tolerance = 1e-7;  // infinity norm
  double step_size = 0.1;            // gradient descent only
};

struct MinimizeResult {
  Eigen::VectorXd x;
  double value = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Quasi-Newton descent with an inverse-Hessian BFGS update and Armijo
/// backtracking. The update is skipped when the curvature condition fails.
MinimizeResult minimize_bfgs(const Objective& f, Eigen::VectorXd x0, const MinimizeOptions& opts = {});

/// Fixed-step steepest descent.
MinimizeResult minimize_gradient_descent(const Objective& f, Eigen::VectorXd x0,
                                         const MinimizeOptions& opts = {});

/// Central-difference gradient with step h.
Eigen::VectorXd central_difference(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x, double h);

}  // namespace spapred
