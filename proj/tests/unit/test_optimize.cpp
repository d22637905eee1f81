#include "spapred/fci.hpp"
#include "spapred/hamiltonian.hpp"
#include "spapred/optimize.hpp"
#include "spapred/orbital_opt.hpp"
#include "spapred/spa.hpp"

#include <gtest/gtest.h>

using namespace spapred;

namespace {

// f = (1 - x)^2 + 100 (y - x^2)^2
double rosenbrock(const Eigen::VectorXd& v, Eigen::VectorXd* g) {
  const double x = v[0], y = v[1];
  if (g) {
    g->resize(2);
    (*g)[0] = -2 * (1 - x) - 400 * x * (y - x * x);
    (*g)[1] = 200 * (y - x * x);
  }
  return (1 - x) * (1 - x) + 100 * (y - x * x) * (y - x * x);
}

}  // namespace

TEST(Bfgs, Rosenbrock) {
  const auto r = minimize_bfgs(rosenbrock, Eigen::Vector2d(-1.2, 1.0));
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0], 1.0, 1e-6);
  EXPECT_NEAR(r.x[1], 1.0, 1e-6);
  EXPECT_LT(r.gradient_norm, 1e-7);
}

TEST(GradientDescent, Quadratic) {
  const Objective f = [](const Eigen::VectorXd& x, Eigen::VectorXd* g) {
    if (g) *g = 2.0 * x;
    return x.squaredNorm();
  };
  MinimizeOptions o;
  o.step_size = 0.25;
  const auto r = minimize_gradient_descent(f, Eigen::Vector3d(1, -2, 3), o);
  EXPECT_TRUE(r.converged);
  EXPECT_LT(r.x.norm(), 1e-7);
}

TEST(CentralDifference, MatchesAnalytic) {
  const auto f = [](const Eigen::VectorXd& x) { return rosenbrock(x, nullptr); };
  Eigen::VectorXd g;
  const Eigen::Vector2d x(0.3, -0.2);
  rosenbrock(x, &g);
  EXPECT_LT((central_difference(f, x, 1e-5) - g).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(OrbitalOptimization, LowersEnergyAndPreservesSpectrum) {
  const auto g = generate_random(4, 2.5, 21);
  const auto base = molecular_tensors(g, best_matching(g));
  const auto kappa0 = pair_guess_generator(4);
  const auto guess = rotate_orbitals(base, OrbitalRotation::from_generator(kappa0));
  const auto theta_guess = optimize_angles(guess, {0.0, 0.0});
  const double e_guess = spa_energy(guess, theta_guess);

  const auto r = optimize_orbitals(base, kappa0, {0.0, 0.0});
  EXPECT_LE(r.energy, e_guess + 1e-10);
  EXPECT_NEAR(r.energy, spa_energy(r.rotated, r.theta), 1e-12);
  EXPECT_TRUE(r.kappa.isApprox(-r.kappa.transpose()));
  const double fci = exact_ground_energy(to_qubit(base), 4);
  EXPECT_GE(r.energy, fci - 1e-8);
}

TEST(OrbitalOptimization, AngleOptimumHasVanishingGradient) {
  const auto g = generate_random(6, 2.5, 22);
  const auto t = rotate_orbitals(molecular_tensors(g, best_matching(g)),
                                 OrbitalRotation::from_generator(pair_guess_generator(6)));
  const auto theta = optimize_angles(t, {0.1, 0.1, 0.1});
  for (double d : spa_energy_gradient(t, theta)) EXPECT_LT(std::abs(d), 1e-6);
}
