#include "spapred/fci.hpp"

#include "spapred/rng.hpp"

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <map>

namespace spapred {

namespace {

constexpr Eigen::Index kDenseLimit = 1500;

template <typename Scalar>
double lanczos_lowest(const Eigen::SparseMatrix<Scalar>& A) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index dim = A.rows();
  const int max_krylov = static_cast<int>(std::min<Eigen::Index>(dim, 400));

  Rng rng(0x5eedULL);
  Vec v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = rng.uniform(-1.0, 1.0);
  v.normalize();

  std::vector<Vec> basis;
  std::vector<double> alpha, beta;
  double lowest = 0.0;
  for (int m = 0; m < max_krylov; ++m) {
    basis.push_back(v);
    Vec w = A * v;
    alpha.push_back(std::real(v.dot(w)));
    // Full reorthogonalization, applied twice for stability.
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) w -= b * b.dot(w);
    const double bnorm = w.norm();

    const int k = static_cast<int>(alpha.size());
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i) {
      T(i, i) = alpha[i];
      if (i + 1 < k) T(i, i + 1) = T(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    lowest = es.eigenvalues()[0];
    const double residual = bnorm * std::abs(es.eigenvectors()(k - 1, 0));
    if (residual < 1e-11 || bnorm < 1e-14) break;
    beta.push_back(bnorm);
    v = w / bnorm;
  }
  return lowest;
}

template <typename Scalar>
double lowest_eigenvalue(const Eigen::SparseMatrix<Scalar>& A) {
  if (A.rows() <= kDenseLimit) {
    using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    const Dense dense(A);
    Eigen::SelfAdjointEigenSolver<Dense> es(dense, Eigen::EigenvaluesOnly);
    return es.eigenvalues()[0];
  }
  return lanczos_lowest(A);
}

}  // namespace

double lanczos_lowest_eigenvalue(const Eigen::SparseMatrix<double>& A) { return lanczos_lowest(A); }

ParticleSector particle_sector(const PauliPolynomial& H, int n_electrons) {
  const int q = H.n_qubits();
  if (q > kMaxFciQubits)
    throw UnsupportedSizeError("exact diagonalization limited to 16 qubits, got " +
                               std::to_string(q));
  if (n_electrons < 0 || n_electrons > q) throw std::invalid_argument("invalid electron count");

  ParticleSector sector;
  const std::uint64_t full = std::uint64_t{1} << q;
  std::vector<int> lookup(full, -1);
  for (std::uint64_t s = 0; s < full; ++s) {
    if (std::popcount(s) == n_electrons) {
      lookup[s] = static_cast<int>(sector.states.size());
      sector.states.push_back(s);
    }
  }

  // Terms sharing an X mask connect the same pair of basis states.
  std::map<std::uint64_t, std::vector<PauliTerm>> groups;
  for (const auto& t : H.terms()) groups[t.string.x].push_back(t);

  const auto dim = static_cast<Eigen::Index>(sector.states.size());
  std::vector<Eigen::Triplet<std::complex<double>>> triplets;
  for (Eigen::Index col = 0; col < dim; ++col) {
    const std::uint64_t j = sector.states[col];
    for (const auto& [x, terms] : groups) {
      const int row = lookup[j ^ x];
      if (row < 0) continue;
      std::complex<double> v = 0.0;
      for (const auto& t : terms) v += t.coefficient * apply_phase(t.string, j);
      if (std::abs(v) > 0.0) triplets.emplace_back(row, col, v);
    }
  }
  sector.matrix.resize(dim, dim);
  sector.matrix.setFromTriplets(triplets.begin(), triplets.end());
  return sector;
}

double exact_ground_energy(const PauliPolynomial& H, int n_electrons) {
  const auto sector = particle_sector(H, n_electrons);
  if (sector.matrix.rows() == 0) throw std::invalid_argument("empty particle sector");

  bool real = true;
  for (int k = 0; k < sector.matrix.outerSize() && real; ++k)
    for (Eigen::SparseMatrix<std::complex<double>>::InnerIterator it(sector.matrix, k); it; ++it)
      if (std::abs(it.value().imag()) > 1e-13) {
        real = false;
        break;
      }
  if (real) {
    const Eigen::SparseMatrix<double> re = sector.matrix.real();
    return lowest_eigenvalue(re);
  }
  return lowest_eigenvalue(sector.matrix);
}

}  // namespace spapred
