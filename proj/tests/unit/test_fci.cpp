#include "spapred/fci.hpp"
#include "spapred/hamiltonian.hpp"

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include <bit>

using namespace spapred;

namespace {

PauliPolynomial qubit_h(const Geometry& g) { return to_qubit(molecular_tensors(g, best_matching(g))); }

double dense_sector_minimum(const PauliPolynomial& H, int n) {
  const Eigen::MatrixXcd m = H.to_dense();
  std::vector<Eigen::Index> idx;
  for (Eigen::Index s = 0; s < m.rows(); ++s)
    if (std::popcount(static_cast<std::uint64_t>(s)) == n) idx.push_back(s);
  Eigen::MatrixXcd block(idx.size(), idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) block(i, j) = m(idx[i], idx[j]);
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(block).eigenvalues()[0];
}

}  // namespace

TEST(Fci, ZeroAndIdentityPolynomials) {
  EXPECT_EQ(exact_ground_energy(PauliPolynomial(4), 2), 0.0);
  const auto c = PauliPolynomial::from_terms(4, {{PauliString{}, -0.75}});
  EXPECT_DOUBLE_EQ(exact_ground_energy(c, 2), -0.75);
}

TEST(Fci, SectorDimension) {
  const auto s = particle_sector(qubit_h(generate_random(4, 2.5, 0)), 4);
  EXPECT_EQ(s.states.size(), 70u);
  EXPECT_EQ(s.matrix.rows(), 70);
}

TEST(Fci, MatchesDenseSectorOnH4) {
  for (std::uint64_t s = 0; s < 4; ++s) {
    const auto H = qubit_h(generate_random(4, 2.5, s));
    EXPECT_NEAR(exact_ground_energy(H, 4), dense_sector_minimum(H, 4), 1e-10);
  }
}

TEST(Fci, LanczosAgreesWithDense) {
  const auto H = qubit_h(generate_random(6, 2.5, 3));
  const Eigen::SparseMatrix<double> a = particle_sector(H, 6).matrix.real();
  const Eigen::MatrixXd dense(a);
  const double ref = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(dense).eigenvalues()[0];
  EXPECT_NEAR(lanczos_lowest_eigenvalue(a), ref, 1e-9);
}

TEST(Fci, H8UsesLargeSectorPath) {
  const auto g = generate_random(8, 2.5, 1);
  const auto H = qubit_h(g);
  const double e = exact_ground_energy(H, 8);
  EXPECT_TRUE(std::isfinite(e));
  EXPECT_LT(e, H.identity_coefficient());
}

TEST(Fci, RejectsLargeRegisters) {
  EXPECT_THROW(exact_ground_energy(PauliPolynomial(18), 2), UnsupportedSizeError);
}
