#include "spapred/hamiltonian.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <array>
#include <cmath>
#include <numbers>

namespace spapred {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Transforms the last index with R and moves it to the front:
// out(d', a, b, c) = sum_d in(a, b, c, d) R(d, d').
void quarter_transform(const FourIndex& in, const Eigen::MatrixXd& R, FourIndex& out) {
  const int n = in.dim();
  const Eigen::Index rows = static_cast<Eigen::Index>(n) * n * n;
  Eigen::Map<const RowMajor> a(in.data().data(), rows, n);
  Eigen::Map<RowMajor> b(out.data().data(), n, rows);
  b.noalias() = (a * R).transpose();
}

struct Ladder {
  std::array<PauliString, 2> strings;
  std::array<std::complex<double>, 2> coeffs;
};

Ladder ladder(int j, bool create) {
  const std::uint64_t bit = std::uint64_t{1} << j;
  const std::uint64_t below = bit - 1;
  Ladder l;
  l.strings[0] = PauliString{bit, below};        // X_j Z_<j
  l.strings[1] = PauliString{bit, below | bit};  // Y_j Z_<j
  l.coeffs[0] = {0.5, 0.0};
  l.coeffs[1] = {0.0, create ? -0.5 : 0.5};
  return l;
}

using Accumulator = std::unordered_map<PauliString, std::complex<double>, PauliStringHash>;

const std::complex<double> kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

void add_product(Accumulator& acc, double weight, const Ladder* ops, int count) {
  for (int mask = 0; mask < (1 << count); ++mask) {
    PauliString s{};
    std::complex<double> c = weight;
    int phase = 0;
    for (int k = 0; k < count; ++k) {
      const int pick = (mask >> k) & 1;
      PauliString next;
      phase += multiply(s, ops[k].strings[pick], next);
      s = next;
      c *= ops[k].coeffs[pick];
    }
    acc[s] += c * kIPow[phase % 4];
  }
}

}  // namespace

LowdinResult lowdin_orbitals(const IntegralTables& tables) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tables.overlap);
  const Eigen::VectorXd ev = es.eigenvalues();
  if (ev.minCoeff() <= 0.0 || ev.maxCoeff() / ev.minCoeff() > kMaxOverlapCondition)
    throw LinearDependenceError("overlap matrix nearly singular (atoms nearly coincident)");
  LowdinResult out;
  out.coefficients =
      es.eigenvectors() * ev.cwiseInverse().cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();

  MolecularTensors ao;
  ao.one_body = tables.core();
  ao.two_body = tables.eri;
  ao.constant = tables.nuclear_repulsion;
  out.tensors = rotate_orbitals(ao, out.coefficients);
  return out;
}

OrbitalRotation OrbitalRotation::identity(int n) {
  return {Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Identity(n, n)};
}

OrbitalRotation OrbitalRotation::from_generator(const Eigen::MatrixXd& kappa) {
  if (kappa.rows() != kappa.cols()) throw std::invalid_argument("kappa must be square");
  if ((kappa + kappa.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("kappa must be antisymmetric");
  OrbitalRotation rot;
  rot.kappa = kappa;
  rot.R = kappa.exp();
  return rot;
}

Eigen::MatrixXd generator_from_vector(const Eigen::VectorXd& v, int n) {
  if (v.size() != static_cast<Eigen::Index>(n) * (n - 1) / 2)
    throw std::invalid_argument("generator vector has the wrong length");
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  int idx = 0;
  for (int i = 1; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      k(i, j) = v[idx];
      k(j, i) = -v[idx];
      ++idx;
    }
  }
  return k;
}

Eigen::VectorXd vector_from_generator(const Eigen::MatrixXd& kappa) {
  const int n = static_cast<int>(kappa.rows());
  Eigen::VectorXd v(static_cast<Eigen::Index>(n) * (n - 1) / 2);
  int idx = 0;
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < i; ++j) v[idx++] = kappa(i, j);
  return v;
}

MolecularTensors rotate_orbitals(const MolecularTensors& t, const Eigen::MatrixXd& R) {
  const int n = t.n_orbitals();
  if (R.rows() != n || R.cols() != n) throw std::invalid_argument("rotation dimension mismatch");
  MolecularTensors out;
  out.constant = t.constant;
  out.one_body = R.transpose() * t.one_body * R;
  FourIndex a(n), b(n);
  quarter_transform(t.two_body, R, a);
  quarter_transform(a, R, b);
  quarter_transform(b, R, a);
  quarter_transform(a, R, b);
  out.two_body = std::move(b);
  return out;
}

MolecularTensors rotate_orbitals(const MolecularTensors& t, const OrbitalRotation& rot) {
  return rotate_orbitals(t, rot.R);
}

std::vector<int> pair_orbital_order(const PairMatching& matching) {
  std::vector<int> order;
  for (const auto& [a, b] : matching.pairs) {
    order.push_back(a);
    order.push_back(b);
  }
  return order;
}

MolecularTensors pair_ordered(const MolecularTensors& t, const PairMatching& matching) {
  const int n = t.n_orbitals();
  matching.validate(n);
  const auto order = pair_orbital_order(matching);
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
  for (int o = 0; o < n; ++o) P(order[o], o) = 1.0;
  return rotate_orbitals(t, P);
}

Eigen::MatrixXd pair_guess_generator(int n_orbitals) {
  if (n_orbitals % 2 != 0) throw std::invalid_argument("pair guess needs an even orbital count");
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n_orbitals, n_orbitals);
  for (int p = 0; p < n_orbitals / 2; ++p) {
    k(2 * p + 1, 2 * p) = std::numbers::pi / 4.0;
    k(2 * p, 2 * p + 1) = -std::numbers::pi / 4.0;
  }
  return k;
}

PauliPolynomial to_qubit(const MolecularTensors& t) {
  const int n = t.n_orbitals();
  const int n_qubits = 2 * n;
  if (n_qubits > PauliPolynomial::kMaxQubits) throw std::invalid_argument("too many orbitals");

  std::vector<Ladder> create(n_qubits), annihilate(n_qubits);
  for (int j = 0; j < n_qubits; ++j) {
    create[j] = ladder(j, true);
    annihilate[j] = ladder(j, false);
  }

  Accumulator acc;
  acc[PauliString{}] += t.constant;
  constexpr double kSkip = 1e-15;

  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      const double h = t.one_body(p, q);
      if (std::abs(h) < kSkip) continue;
      for (int s = 0; s < 2; ++s) {
        const Ladder ops[2] = {create[2 * p + s], annihilate[2 * q + s]};
        add_product(acc, h, ops, 2);
      }
    }
  }

  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      for (int r = 0; r < n; ++r) {
        for (int s = 0; s < n; ++s) {
          const double v = t.two_body(p, q, r, s);
          if (std::abs(v) < kSkip) continue;
          for (int sig = 0; sig < 2; ++sig) {
            for (int tau = 0; tau < 2; ++tau) {
              const int P = 2 * p + sig, Q = 2 * q + sig, R = 2 * r + tau, S = 2 * s + tau;
              if (P == R || Q == S) continue;
              const Ladder ops[4] = {create[P], create[R], annihilate[S], annihilate[Q]};
              add_product(acc, 0.5 * v, ops, 4);
            }
          }
        }
      }
    }
  }
  return PauliPolynomial::from_accumulator(n_qubits, acc);
}

PauliPolynomial to_qubit(const MolecularTensors& t, const PairMatching& matching) {
  return to_qubit(pair_ordered(t, matching));
}

MolecularTensors molecular_tensors(const Geometry& geom, const PairMatching& matching) {
  const auto tables = compute_integrals(build_basis(geom));
  return pair_ordered(lowdin_orbitals(tables).tensors, matching);
}

}  // namespace spapred
