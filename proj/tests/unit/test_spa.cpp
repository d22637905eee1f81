#include "spapred/hamiltonian.hpp"
#include "spapred/rng.hpp"
#include "spapred/spa.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace spapred;

namespace {

constexpr double kPi = std::numbers::pi;

struct Instance {
  MolecularTensors tensors;
  PauliPolynomial H;
};

Instance instance(int n, std::uint64_t seed) {
  const auto g = generate_random(n, 2.5, seed);
  auto t = rotate_orbitals(molecular_tensors(g, best_matching(g)),
                           OrbitalRotation::from_generator(pair_guess_generator(n)));
  auto H = to_qubit(t);
  return {std::move(t), std::move(H)};
}

SpaAnsatz random_angles(int pairs, Rng& rng) {
  SpaAnsatz a;
  for (int p = 0; p < pairs; ++p) a.theta.push_back(rng.uniform(-kPi, kPi));
  return a;
}

PauliPolynomial single(const std::string& word, double c = 1.0) {
  return PauliPolynomial::from_terms(static_cast<int>(word.size()), {{PauliString::from_word(word), c}});
}

}  // namespace

TEST(Prepare, ReferenceAndLimits) {
  auto s = prepare({{0.0}})[0];
  EXPECT_EQ(s[kOccupiedFirst], 1.0);
  EXPECT_EQ(s[kOccupiedSecond], 0.0);
  s = prepare({{kPi}})[0];
  EXPECT_NEAR(std::abs(s[kOccupiedFirst]), 0.0, 1e-15);
  EXPECT_NEAR(s[kOccupiedSecond].real(), -1.0, 1e-15);
  s = prepare({{kPi / 2}})[0];
  double norm = 0.0;
  for (const auto& a : s) norm += std::norm(a);
  EXPECT_NEAR(norm, 1.0, 1e-12);
  EXPECT_NEAR(std::abs(s[kOccupiedFirst]), std::abs(s[kOccupiedSecond]), 1e-15);
}

TEST(Prepare, UnitNormForRandomAngles) {
  Rng rng(1);
  for (const auto& s : prepare(random_angles(5, rng))) {
    double norm = 0.0;
    for (const auto& a : s) norm += std::norm(a);
    EXPECT_NEAR(norm, 1.0, 1e-12);
  }
}

TEST(Expectation, IdentityPolynomial) {
  EXPECT_DOUBLE_EQ(expectation(single("IIII", 0.37), SpaAnsatz{{1.1}}), 0.37);
  EXPECT_EQ(expectation(PauliPolynomial(8), SpaAnsatz{{0.3, 0.2}}), 0.0);
}

TEST(Expectation, OccupiedQubitSign) {
  // Qubit 0 holds an electron at theta = 0, so n_0 = (I - Z_0) / 2 is 1.
  EXPECT_DOUBLE_EQ(expectation(single("ZIII"), SpaAnsatz{{0.0}}), -1.0);
  EXPECT_DOUBLE_EQ(expectation(single("IIZI"), SpaAnsatz{{0.0}}), 1.0);
  EXPECT_NEAR(expectation(single("ZIII"), SpaAnsatz{{kPi}}), 1.0, 1e-15);
}

TEST(Expectation, QubitMismatch) {
  EXPECT_THROW(expectation(single("ZIII"), SpaAnsatz{{0.0, 0.0}}), std::invalid_argument);
}

TEST(Expectation, FactorizationMatchesStatevector) {
  Rng rng(2);
  for (int n : {4, 6}) {
    for (std::uint64_t s = 0; s < 5; ++s) {
      const auto inst = instance(n, 100 + s);
      const auto a = random_angles(n / 2, rng);
      EXPECT_NEAR(expectation(inst.H, a), dense_expectation(inst.H, full_statevector(a)), 1e-10);
    }
  }
}

TEST(Expectation, DenseMatrixOracleOnH4) {
  Rng rng(3);
  const auto inst = instance(4, 7);
  const auto a = random_angles(2, rng);
  const Eigen::VectorXcd v = full_statevector(a);
  const double ref = (v.adjoint() * inst.H.to_dense() * v)(0, 0).real();
  EXPECT_NEAR(expectation(inst.H, a), ref, 1e-10);
}

TEST(Expectation, Periodicity) {
  const auto inst = instance(4, 8);
  const SpaAnsatz a{{0.4, -1.3}};
  EXPECT_NEAR(expectation(inst.H, a), expectation(inst.H, SpaAnsatz{{0.4 + 2 * kPi, -1.3}}), 1e-12);
}

TEST(Statevector, Shapes) {
  const auto v1 = full_statevector({{0.0}});
  ASSERT_EQ(v1.size(), 16);
  EXPECT_EQ(v1[kOccupiedFirst], 1.0);
  const auto v2 = full_statevector({{0.3, 1.2}});
  EXPECT_EQ(v2.size(), 256);
  EXPECT_NEAR(v2.norm(), 1.0, 1e-12);
  EXPECT_THROW(full_statevector(SpaAnsatz{std::vector<double>(6, 0.0)}), std::length_error);
}

TEST(Gradient, IdentityIsZero) {
  for (double g : gradient(single("IIIIIIII", 2.0), SpaAnsatz{{0.3, 0.1}})) EXPECT_EQ(g, 0.0);
}

TEST(Gradient, ParameterShiftMatchesFiniteDifferences) {
  Rng rng(4);
  const double h = 1e-5;
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto inst = instance(4, 200 + s);
    const auto a = random_angles(2, rng);
    const auto g = gradient(inst.H, a);
    for (int p = 0; p < 2; ++p) {
      auto plus = a, minus = a;
      plus.theta[p] += h;
      minus.theta[p] -= h;
      const double fd = (expectation(inst.H, plus) - expectation(inst.H, minus)) / (2 * h);
      EXPECT_NEAR(g[p], fd, 1e-6);
    }
  }
}

TEST(ClosedForm, MatchesPauliExpectation) {
  Rng rng(5);
  for (int n : {2, 4, 6, 8}) {
    const auto inst = instance(n, 300 + n);
    const auto a = random_angles(n / 2, rng);
    EXPECT_NEAR(spa_energy(inst.tensors, a.theta), expectation(inst.H, a), 1e-10) << n;
  }
}

TEST(ClosedForm, GradientMatchesParameterShift) {
  Rng rng(6);
  const auto inst = instance(6, 9);
  const auto a = random_angles(3, rng);
  const auto g1 = spa_energy_gradient(inst.tensors, a.theta);
  const auto g2 = gradient(inst.H, a);
  for (int p = 0; p < 3; ++p) EXPECT_NEAR(g1[p], g2[p], 1e-10);
}

TEST(NormalizeAngle, HalfOpenInterval) {
  EXPECT_DOUBLE_EQ(normalize_angle(kPi), kPi);
  EXPECT_DOUBLE_EQ(normalize_angle(-kPi), kPi);
  EXPECT_NEAR(normalize_angle(3 * kPi), kPi, 1e-12);
  EXPECT_NEAR(normalize_angle(2 * kPi + 0.5), 0.5, 1e-12);
  EXPECT_DOUBLE_EQ(normalize_angle(0.0), 0.0);
  const auto n = SpaAnsatz{{-4.0, 7.0}}.normalized();
  for (double t : n.theta) {
    EXPECT_GT(t, -kPi);
    EXPECT_LE(t, kPi);
  }
}
