#pragma once

#include "spapred/hamiltonian.hpp"
#include "spapred/pauli.hpp"

#include <Eigen/Core>

#include <array>
#include <complex>
#include <span>
#include <vector>

namespace spapred {

/// Separable pair ansatz: pair p lives on qubits 4p..4p+3, ordered
/// (a up, a down, b up, b down), and holds
///   cos(theta_p / 2) |1100> - sin(theta_p / 2) |0011>,
/// where |1100> has orbital a doubly occupied. In basis-index form (bit q =
/// qubit q) these are indices 3 and 12 of the pair block.
struct SpaAnsatz {
  std::vector<double> theta;

  int n_pairs() const { return static_cast<int>(theta.size()); }
  int n_qubits() const { return 4 * n_pairs(); }
  /// Copy with every angle mapped into (-pi, pi].
  SpaAnsatz normalized() const;
};

inline constexpr int kPairQubits = 4;
inline constexpr int kPairDim = 16;
inline constexpr int kOccupiedFirst = 0b0011;   // |1100>
inline constexpr int kOccupiedSecond = 0b1100;  // |0011>

using PairState = std::array<std::complex<double>, kPairDim>;

/// Maps an angle into (-pi, pi].
double normalize_angle(double theta);

std::vector<PairState> prepare(const SpaAnsatz& ansatz);

/// Exact <Psi|H|Psi> for a product of pair states; each Pauli string
/// factorizes into 4-qubit blocks.
double expectation(const PauliPolynomial& H, std::span<const PairState> states);
double expectation(const PauliPolynomial& H, const SpaAnsatz& ansatz);

inline constexpr int kMaxStatevectorQubits = 20;

/// Kronecker product of the pair states, pair 0 in the lowest bits.
Eigen::VectorXcd full_statevector(const SpaAnsatz& ansatz);

/// <v|H|v> applied term by term; oracle for the factorized evaluator.
double dense_expectation(const PauliPolynomial& H, const Eigen::VectorXcd& v);

/// Parameter-shift gradient dE/dtheta_p = (E(+pi/2) - E(-pi/2)) / 2.
std::vector<double> gradient(const PauliPolynomial& H, const SpaAnsatz& ansatz);

/// SPA energy straight from pair-ordered orbital tensors, without building
/// the qubit operator:
///   E = const + sum_p E_pair(p) + sum_{p<q} sum_{i in p, j in q} n_i n_j (4 J_ij - 2 K_ij)
/// with E_pair = c^2 (2 h_aa + J_aa) + s^2 (2 h_bb + J_bb) + 2 c s' K_ab,
/// n_a = c^2, n_b = s^2, c = cos(theta/2), s' = -sin(theta/2).
double spa_energy(const MolecularTensors& t, std::span<const double> theta);
/// Exact analytic gradient of spa_energy with respect to the angles.
std::vector<double> spa_energy_gradient(const MolecularTensors& t, std::span<const double> theta);

}  // namespace spapred
