#include "spapred/spa.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spapred {

namespace {

using Complex = std::complex<double>;
using BlockTable = std::array<Complex, kPairDim * kPairDim>;  // [x * 16 + z]

const Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

PairState pair_state(double theta) {
  PairState s{};
  s[kOccupiedFirst] = std::cos(theta / 2.0);
  s[kOccupiedSecond] = -std::sin(theta / 2.0);
  return s;
}

// <psi| P |psi> for every 4-qubit Pauli string P.
BlockTable block_table(const PairState& psi) {
  BlockTable table{};
  for (int x = 0; x < kPairDim; ++x) {
    for (int z = 0; z < kPairDim; ++z) {
      Complex acc = 0.0;
      for (int j = 0; j < kPairDim; ++j) {
        if (psi[j] == Complex(0.0) || psi[j ^ x] == Complex(0.0)) continue;
        const int k = std::popcount(static_cast<unsigned>(x & z)) +
                      2 * std::popcount(static_cast<unsigned>(z & j));
        acc += std::conj(psi[j ^ x]) * kIPow[k % 4] * psi[j];
      }
      table[x * kPairDim + z] = acc;
    }
  }
  return table;
}

int block_index(const PauliString& s, int pair) {
  const int shift = kPairQubits * pair;
  const int x = static_cast<int>((s.x >> shift) & 0xF);
  const int z = static_cast<int>((s.z >> shift) & 0xF);
  return x * kPairDim + z;
}

void check_qubits(const PauliPolynomial& H, std::size_t n_pairs) {
  if (static_cast<std::size_t>(H.n_qubits()) != kPairQubits * n_pairs)
    throw std::invalid_argument("Hamiltonian acts on " + std::to_string(H.n_qubits()) +
                                " qubits but the ansatz has " + std::to_string(n_pairs) +
                                " pairs");
}

}  // namespace

double normalize_angle(double theta) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(theta, two_pi);
  if (r > std::numbers::pi) r -= two_pi;
  if (r <= -std::numbers::pi) r += two_pi;
  return r;
}

SpaAnsatz SpaAnsatz::normalized() const {
  SpaAnsatz out = *this;
  for (auto& t : out.theta) t = normalize_angle(t);
  return out;
}

std::vector<PairState> prepare(const SpaAnsatz& ansatz) {
  std::vector<PairState> states;
  states.reserve(ansatz.theta.size());
  for (double t : ansatz.theta) states.push_back(pair_state(t));
  return states;
}

double expectation(const PauliPolynomial& H, std::span<const PairState> states) {
  check_qubits(H, states.size());
  std::vector<BlockTable> tables;
  tables.reserve(states.size());
  for (const auto& s : states) tables.push_back(block_table(s));

  const int n_pairs = static_cast<int>(states.size());
  double energy = 0.0;
  for (const auto& term : H.terms()) {
    Complex v = term.coefficient;
    for (int p = 0; p < n_pairs && v != Complex(0.0); ++p) v *= tables[p][block_index(term.string, p)];
    energy += v.real();
  }
  return energy;
}

double expectation(const PauliPolynomial& H, const SpaAnsatz& ansatz) {
  const auto states = prepare(ansatz);
  return expectation(H, states);
}

Eigen::VectorXcd full_statevector(const SpaAnsatz& ansatz) {
  if (ansatz.n_qubits() > kMaxStatevectorQubits)
    throw std::length_error("statevector limited to 20 qubits");
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(1);
  for (const auto& psi : prepare(ansatz)) {
    Eigen::VectorXcd next(v.size() * kPairDim);
    for (int k = 0; k < kPairDim; ++k) next.segment(k * v.size(), v.size()) = v * psi[k];
    v = std::move(next);
  }
  return v;
}

double dense_expectation(const PauliPolynomial& H, const Eigen::VectorXcd& v) {
  if (v.size() != (Eigen::Index{1} << H.n_qubits()))
    throw std::invalid_argument("statevector size does not match the qubit count");
  Complex total = 0.0;
  for (const auto& t : H.terms()) {
    Complex acc = 0.0;
    for (Eigen::Index j = 0; j < v.size(); ++j) {
      if (v[j] == Complex(0.0)) continue;
      const auto uj = static_cast<std::uint64_t>(j);
      acc += std::conj(v[static_cast<Eigen::Index>(uj ^ t.string.x)]) * apply_phase(t.string, uj) *
             v[j];
    }
    total += t.coefficient * acc;
  }
  return total.real();
}

std::vector<double> gradient(const PauliPolynomial& H, const SpaAnsatz& ansatz) {
  const int n_pairs = ansatz.n_pairs();
  check_qubits(H, static_cast<std::size_t>(n_pairs));
  constexpr double shift = std::numbers::pi / 2.0;
  std::vector<BlockTable> base(n_pairs), plus(n_pairs), minus(n_pairs);
  for (int p = 0; p < n_pairs; ++p) {
    base[p] = block_table(pair_state(ansatz.theta[p]));
    plus[p] = block_table(pair_state(ansatz.theta[p] + shift));
    minus[p] = block_table(pair_state(ansatz.theta[p] - shift));
  }

  // E(theta_p +- pi/2) shares every factor except pair p, so all shifted
  // energies come from one pass using prefix and suffix products.
  std::vector<double> grad(n_pairs, 0.0);
  std::vector<Complex> prefix(n_pairs + 1), suffix(n_pairs + 1);
  for (const auto& term : H.terms()) {
    prefix[0] = 1.0;
    for (int p = 0; p < n_pairs; ++p)
      prefix[p + 1] = prefix[p] * base[p][block_index(term.string, p)];
    suffix[n_pairs] = 1.0;
    for (int p = n_pairs - 1; p >= 0; --p)
      suffix[p] = suffix[p + 1] * base[p][block_index(term.string, p)];
    for (int p = 0; p < n_pairs; ++p) {
      const int idx = block_index(term.string, p);
      const Complex others = prefix[p] * suffix[p + 1];
      grad[p] += 0.5 * term.coefficient * (others * (plus[p][idx] - minus[p][idx])).real();
    }
  }
  return grad;
}

double spa_energy(const MolecularTensors& t, std::span<const double> theta) {
  const int n = t.n_orbitals();
  if (n != 2 * static_cast<int>(theta.size()))
    throw std::invalid_argument("spa_energy: orbital count must be twice the pair count");
  std::vector<double> occ(n);
  for (std::size_t p = 0; p < theta.size(); ++p) {
    const double c = std::cos(theta[p] / 2.0);
    const double s = std::sin(theta[p] / 2.0);
    occ[2 * p] = c * c;
    occ[2 * p + 1] = s * s;
  }
  const auto& h = t.one_body;
  const auto& g = t.two_body;
  double e = t.constant;
  for (std::size_t p = 0; p < theta.size(); ++p) {
    const int a = static_cast<int>(2 * p), b = a + 1;
    e += occ[a] * (2.0 * h(a, a) + g(a, a, a, a)) + occ[b] * (2.0 * h(b, b) + g(b, b, b, b)) -
         std::sin(theta[p]) * g(a, b, a, b);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i / 2 < j / 2) e += occ[i] * occ[j] * (4.0 * g(i, i, j, j) - 2.0 * g(i, j, j, i));
  return e;
}

std::vector<double> spa_energy_gradient(const MolecularTensors& t, std::span<const double> theta) {
  const int n = t.n_orbitals();
  if (n != 2 * static_cast<int>(theta.size()))
    throw std::invalid_argument("spa_energy_gradient: orbital count must be twice the pair count");
  const auto& h = t.one_body;
  const auto& g = t.two_body;
  std::vector<double> occ(n), docc(n);
  for (std::size_t p = 0; p < theta.size(); ++p) {
    const double c = std::cos(theta[p] / 2.0);
    const double s = std::sin(theta[p] / 2.0);
    occ[2 * p] = c * c;
    occ[2 * p + 1] = s * s;
    docc[2 * p] = -0.5 * std::sin(theta[p]);
    docc[2 * p + 1] = 0.5 * std::sin(theta[p]);
  }
  std::vector<double> grad(theta.size(), 0.0);
  for (std::size_t p = 0; p < theta.size(); ++p) {
    const int a = static_cast<int>(2 * p), b = a + 1;
    double d = docc[a] * (2.0 * h(a, a) + g(a, a, a, a)) + docc[b] * (2.0 * h(b, b) + g(b, b, b, b)) -
               std::cos(theta[p]) * g(a, b, a, b);
    for (int i = a; i <= b; ++i)
      for (int j = 0; j < n; ++j)
        if (j / 2 != static_cast<int>(p))
          d += docc[i] * occ[j] * (4.0 * g(i, i, j, j) - 2.0 * g(i, j, j, i));
    grad[p] = d;
  }
  return grad;
}

}  // namespace spapred
