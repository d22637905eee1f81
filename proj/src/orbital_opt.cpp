#include "spapred/orbital_opt.hpp"

#include "spapred/optimize.hpp"
#include "spapred/spa.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace spapred {

std::vector<double> optimize_angles(const MolecularTensors& t, std::vector<double> theta0,
                                    int max_iterations, double tolerance) {
  const Eigen::VectorXd x0 = Eigen::Map<const Eigen::VectorXd>(theta0.data(), theta0.size());
  const Objective f = [&t](const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
    std::span<const double> th(x.data(), static_cast<std::size_t>(x.size()));
    if (grad) {
      const auto g = spa_energy_gradient(t, th);
      *grad = Eigen::Map<const Eigen::VectorXd>(g.data(), g.size());
    }
    return spa_energy(t, th);
  };
  MinimizeOptions opts;
  opts.max_iterations = max_iterations;
  opts.gradient_tolerance = tolerance;
  const auto res = minimize_bfgs(f, x0, opts);
  return {res.x.data(), res.x.data() + res.x.size()};
}

OrbitalOptResult optimize_orbitals(const MolecularTensors& base, const Eigen::MatrixXd& kappa0,
                                   std::vector<double> theta0, const OrbitalOptOptions& opts) {
  const int n = base.n_orbitals();
  OrbitalOptResult out;
  out.kappa = kappa0;
  out.theta = std::move(theta0);
  out.rotated = rotate_orbitals(base, Eigen::MatrixXd(kappa0.exp()));

  for (int cycle = 0; cycle < opts.cycles; ++cycle) {
    out.theta = optimize_angles(out.rotated, out.theta, opts.max_iterations, opts.theta_tolerance);

    const std::vector<double> theta = out.theta;
    const auto energy_at = [&](const Eigen::VectorXd& v) {
      const Eigen::MatrixXd R = generator_from_vector(v, n).exp();
      return spa_energy(rotate_orbitals(base, R), theta);
    };
    const Objective f = [&](const Eigen::VectorXd& v, Eigen::VectorXd* grad) {
      if (grad) *grad = central_difference(energy_at, v, opts.fd_step);
      return energy_at(v);
    };
    MinimizeOptions mo;
    mo.max_iterations = opts.max_iterations;
    mo.gradient_tolerance = opts.kappa_tolerance;
    const auto res = minimize_bfgs(f, vector_from_generator(out.kappa), mo);
    out.kappa = generator_from_vector(res.x, n);
    out.rotated = rotate_orbitals(base, Eigen::MatrixXd(out.kappa.exp()));
  }
  out.theta = optimize_angles(out.rotated, out.theta, opts.max_iterations, opts.theta_tolerance);
  out.energy = spa_energy(out.rotated, out.theta);
  return out;
}

}  // namespace spapred
