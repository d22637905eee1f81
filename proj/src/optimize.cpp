#include "spapred/optimize.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace spapred {

MinimizeResult minimize_bfgs(const Objective& f, Eigen::VectorXd x0, const MinimizeOptions& opts) {
  const Eigen::Index n = x0.size();
  MinimizeResult res;
  res.x = std::move(x0);
  if (n == 0) {
    res.value = f(res.x, nullptr);
    res.converged = true;
    return res;
  }

  Eigen::VectorXd g(n);
  double fx = f(res.x, &g);
  Eigen::MatrixXd Hinv = Eigen::MatrixXd::Identity(n, n);
  bool scaled = false;

  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    if (g.lpNorm<Eigen::Infinity>() < opts.gradient_tolerance) break;
    Eigen::VectorXd d = -Hinv * g;
    double slope = g.dot(d);
    if (!(slope < 0.0)) {
      Hinv.setIdentity();
      d = -g;
      slope = -g.squaredNorm();
    }

    constexpr double c1 = 1e-4;
    double alpha = 1.0;
    Eigen::VectorXd x_new, g_new(n);
    double f_new = 0.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      x_new = res.x + alpha * d;
      f_new = f(x_new, &g_new);
      if (std::isfinite(f_new) && f_new <= fx + c1 * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;

    const Eigen::VectorXd s = x_new - res.x;
    const Eigen::VectorXd y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-14 * s.norm() * y.norm()) {
      if (!scaled) {
        Hinv *= sy / y.squaredNorm();
        scaled = true;
      }
      const double rho = 1.0 / sy;
      const Eigen::VectorXd Hy = Hinv * y;
      Hinv += (rho * rho * y.dot(Hy) + rho) * s * s.transpose() -
              rho * (Hy * s.transpose() + s * Hy.transpose());
    }
    res.x = std::move(x_new);
    fx = f_new;
    g = g_new;
  }
  res.value = fx;
  res.gradient_norm = g.lpNorm<Eigen::Infinity>();
  res.iterations = it;
  res.converged = res.gradient_norm < opts.gradient_tolerance;
  return res;
}

MinimizeResult minimize_gradient_descent(const Objective& f, Eigen::VectorXd x0,
                                         const MinimizeOptions& opts) {
  MinimizeResult res;
  res.x = std::move(x0);
  Eigen::VectorXd g(res.x.size());
  double fx = f(res.x, &g);
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    if (g.size() == 0 || g.lpNorm<Eigen::Infinity>() < opts.gradient_tolerance) break;
    res.x -= opts.step_size * g;
    fx = f(res.x, &g);
  }
  res.value = fx;
  res.gradient_norm = g.size() ? g.lpNorm<Eigen::Infinity>() : 0.0;
  res.iterations = it;
  res.converged = res.gradient_norm < opts.gradient_tolerance;
  return res;
}

Eigen::VectorXd central_difference(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x, double h) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double orig = xp[i];
    xp[i] = orig + h;
    const double fp = f(xp);
    xp[i] = orig - h;
    const double fm = f(xp);
    xp[i] = orig;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

}  // namespace spapred
