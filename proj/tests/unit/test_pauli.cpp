#include "spapred/pauli.hpp"
#include "spapred/rng.hpp"

#include <gtest/gtest.h>

#include <unsupported/Eigen/KroneckerProduct>

using namespace spapred;
using cd = std::complex<double>;

namespace {

Eigen::Matrix2cd single(char c) {
  Eigen::Matrix2cd m;
  switch (c) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, cd(0, -1), cd(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: m.setIdentity();
  }
  return m;
}

// Qubit q is bit q of the basis index, so the highest qubit is the leftmost
// Kronecker factor.
Eigen::MatrixXcd dense(const std::string& word) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
  for (char c : word) m = Eigen::kroneckerProduct(single(c), m).eval();
  return m;
}

std::string random_word(Rng& rng, int n) {
  std::string w;
  for (int i = 0; i < n; ++i) w += "IXYZ"[rng.index(4)];
  return w;
}

const cd kI[4] = {1, cd(0, 1), -1, cd(0, -1)};

}  // namespace

TEST(PauliString, WordRoundTrip) {
  const auto p = PauliString::from_word("IXYZ");
  EXPECT_EQ(p.to_word(4), "IXYZ");
  EXPECT_EQ(p.x, 0b0110u);
  EXPECT_EQ(p.z, 0b1100u);
  EXPECT_THROW(PauliString::from_word("IXQ"), std::invalid_argument);
}

TEST(PauliString, ProductMatchesDenseAlgebra) {
  Rng rng(3);
  for (int t = 0; t < 300; ++t) {
    const auto wa = random_word(rng, 3), wb = random_word(rng, 3);
    PauliString out;
    const int phase = multiply(PauliString::from_word(wa), PauliString::from_word(wb), out);
    const Eigen::MatrixXcd lhs = dense(wa) * dense(wb);
    const Eigen::MatrixXcd rhs = kI[phase] * dense(out.to_word(3));
    ASSERT_TRUE(lhs.isApprox(rhs, 1e-14)) << wa << " * " << wb;
  }
}

TEST(PauliString, ApplyPhaseMatchesDense) {
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    const auto w = random_word(rng, 4);
    const auto p = PauliString::from_word(w);
    const Eigen::MatrixXcd m = dense(w);
    for (std::uint64_t j = 0; j < 16; ++j)
      ASSERT_LT(std::abs(m(static_cast<Eigen::Index>(j ^ p.x), static_cast<Eigen::Index>(j)) -
                         apply_phase(p, j)),
                1e-14);
  }
}

TEST(PauliPolynomial, FromTermsMergesAndPrunes) {
  const auto p = PauliPolynomial::from_terms(
      2, {{PauliString::from_word("ZI"), 0.5}, {PauliString::from_word("ZI"), 0.25},
          {PauliString::from_word("XX"), 1e-14}, {PauliString::from_word("II"), -1.0}});
  ASSERT_EQ(p.size(), 2u);
  EXPECT_DOUBLE_EQ(p.coefficient(PauliString::from_word("ZI")), 0.75);
  EXPECT_DOUBLE_EQ(p.identity_coefficient(), -1.0);
  EXPECT_EQ(p.coefficient(PauliString::from_word("XX")), 0.0);
}

TEST(PauliPolynomial, RejectsImaginaryCoefficients) {
  std::unordered_map<PauliString, cd, PauliStringHash> acc;
  acc[PauliString::from_word("XY")] = cd(0.3, 0.2);
  EXPECT_THROW(PauliPolynomial::from_accumulator(2, acc), std::runtime_error);
  acc[PauliString::from_word("XY")] = cd(0.3, 1e-13);
  EXPECT_NEAR(PauliPolynomial::from_accumulator(2, acc).coefficient(PauliString::from_word("XY")),
              0.3, 1e-15);
}

TEST(PauliPolynomial, RejectsStringOutsideRegister) {
  EXPECT_THROW(PauliPolynomial::from_terms(2, {{PauliString::from_word("IIX"), 1.0}}),
               std::invalid_argument);
}

TEST(PauliPolynomial, DenseIsHermitian) {
  Rng rng(8);
  std::vector<PauliTerm> terms;
  for (int i = 0; i < 20; ++i)
    terms.push_back({PauliString::from_word(random_word(rng, 4)), rng.uniform(-1, 1)});
  const auto m = PauliPolynomial::from_terms(4, terms).to_dense();
  EXPECT_TRUE(m.isApprox(m.adjoint(), 1e-14));
}
