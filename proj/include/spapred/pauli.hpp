#pragma once

#include <Eigen/Core>

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace spapred {

/// Pauli string in symplectic form. Qubit q carries X^x_q Z^z_q times
/// i^(x_q z_q), so x = z = 1 is exactly Y.
struct PauliString {
  std::uint64_t x = 0;
  std::uint64_t z = 0;

  bool operator==(const PauliString&) const = default;
  auto operator<=>(const PauliString&) const = default;

  static PauliString from_word(std::string_view word);
  /// Word with character q describing qubit q, e.g. "ZIXY".
  std::string to_word(int n_qubits) const;
};

struct PauliStringHash {
  std::size_t operator()(const PauliString& p) const noexcept {
    return std::hash<std::uint64_t>{}(p.x * 0x9e3779b97f4a7c15ULL ^ p.z);
  }
};

/// Product a * b = i^phase * c. Returns the phase exponent in [0, 4).
int multiply(const PauliString& a, const PauliString& b, PauliString& out);

struct PauliTerm {
  PauliString string;
  double coefficient;
};

/// Real-coefficient sum of Pauli strings, terms sorted by string.
class PauliPolynomial {
 public:
  inline static constexpr double kPruneThreshold = 1e-12;
  inline static constexpr int kMaxQubits = 64;

  PauliPolynomial() = default;
  explicit PauliPolynomial(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  /// Coefficient of the identity string (0 when absent).
  double identity_coefficient() const;
  double coefficient(const PauliString& s) const;

  /// Builds from accumulated complex coefficients; imaginary parts above
  /// imag_tolerance are an error (the operator would not be hermitian).
  static PauliPolynomial from_accumulator(
      int n_qubits, const std::unordered_map<PauliString, std::complex<double>, PauliStringHash>& acc,
      double imag_tolerance = 1e-10);
  static PauliPolynomial from_terms(int n_qubits, std::vector<PauliTerm> terms);

  /// Dense 2^n x 2^n matrix; basis index bit q is qubit q. Small n only.
  Eigen::MatrixXcd to_dense() const;

 private:
  int n_qubits_ = 0;
  std::vector<PauliTerm> terms_;
};

/// Matrix element phase: P|j> = phase * |j ^ x>, for P in canonical form.
std::complex<double> apply_phase(const PauliString& p, std::uint64_t basis_state);

}  // namespace spapred
