#include "spapred/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace spapred {

namespace {

const std::complex<double> kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

}  // namespace

PauliString PauliString::from_word(std::string_view word) {
  if (word.size() > PauliPolynomial::kMaxQubits) throw std::invalid_argument("Pauli word too long");
  PauliString p;
  for (std::size_t q = 0; q < word.size(); ++q) {
    const std::uint64_t bit = std::uint64_t{1} << q;
    switch (word[q]) {
      case 'I':
        break;
      case 'X':
        p.x |= bit;
        break;
      case 'Y':
        p.x |= bit;
        p.z |= bit;
        break;
      case 'Z':
        p.z |= bit;
        break;
      default:
        throw std::invalid_argument("invalid Pauli character in word: " + std::string(word));
    }
  }
  return p;
}

std::string PauliString::to_word(int n_qubits) const {
  std::string w(n_qubits, 'I');
  for (int q = 0; q < n_qubits; ++q) {
    const bool bx = (x >> q) & 1U;
    const bool bz = (z >> q) & 1U;
    w[q] = bx ? (bz ? 'Y' : 'X') : (bz ? 'Z' : 'I');
  }
  return w;
}

int multiply(const PauliString& a, const PauliString& b, PauliString& out) {
  out.x = a.x ^ b.x;
  out.z = a.z ^ b.z;
  const int phase = std::popcount(a.x & a.z) + std::popcount(b.x & b.z) +
                    2 * std::popcount(a.z & b.x) - std::popcount(out.x & out.z);
  return ((phase % 4) + 4) % 4;
}

std::complex<double> apply_phase(const PauliString& p, std::uint64_t basis_state) {
  const int k = std::popcount(p.x & p.z) + 2 * std::popcount(p.z & basis_state);
  return kIPow[k % 4];
}

PauliPolynomial::PauliPolynomial(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 0 || n_qubits > kMaxQubits) throw std::invalid_argument("unsupported qubit count");
}

double PauliPolynomial::identity_coefficient() const { return coefficient(PauliString{}); }

double PauliPolynomial::coefficient(const PauliString& s) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), s,
                             [](const PauliTerm& t, const PauliString& v) { return t.string < v; });
  if (it != terms_.end() && it->string == s) return it->coefficient;
  return 0.0;
}

PauliPolynomial PauliPolynomial::from_accumulator(
    int n_qubits,
    const std::unordered_map<PauliString, std::complex<double>, PauliStringHash>& acc,
    double imag_tolerance) {
  std::vector<PauliTerm> terms;
  terms.reserve(acc.size());
  for (const auto& [s, c] : acc) {
    if (std::abs(c.imag()) > imag_tolerance)
      throw std::runtime_error("non-hermitian Pauli coefficient on " + s.to_word(n_qubits));
    terms.push_back({s, c.real()});
  }
  return from_terms(n_qubits, std::move(terms));
}

PauliPolynomial PauliPolynomial::from_terms(int n_qubits, std::vector<PauliTerm> terms) {
  PauliPolynomial poly(n_qubits);
  const std::uint64_t mask =
      n_qubits == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_qubits) - 1;
  std::sort(terms.begin(), terms.end(),
            [](const PauliTerm& a, const PauliTerm& b) { return a.string < b.string; });
  for (const auto& t : terms) {
    if ((t.string.x | t.string.z) & ~mask)
      throw std::invalid_argument("Pauli string acts outside the register");
    if (!poly.terms_.empty() && poly.terms_.back().string == t.string)
      poly.terms_.back().coefficient += t.coefficient;
    else
      poly.terms_.push_back(t);
  }
  std::erase_if(poly.terms_,
                [](const PauliTerm& t) { return std::abs(t.coefficient) <= kPruneThreshold; });
  return poly;
}

Eigen::MatrixXcd PauliPolynomial::to_dense() const {
  if (n_qubits_ > 14) throw std::length_error("dense Pauli matrix limited to 14 qubits");
  const std::uint64_t dim = std::uint64_t{1} << n_qubits_;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& t : terms_)
    for (std::uint64_t j = 0; j < dim; ++j)
      m(j ^ t.string.x, j) += t.coefficient * apply_phase(t.string, j);
  return m;
}

}  // namespace spapred
