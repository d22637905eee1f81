#pragma once

#include "spapred/integrals.hpp"
#include "spapred/matching.hpp"
#include "spapred/pauli.hpp"

#include <Eigen/Core>

#include <stdexcept>

namespace spapred {

/// Electronic Hamiltonian in an orthonormal orbital basis:
/// H = sum h_pq a+_p a_q + 1/2 sum (pq|rs) a+_p a+_r a_s a_q + constant.
struct MolecularTensors {
  Eigen::MatrixXd one_body;
  FourIndex two_body;
  double constant = 0.0;

  int n_orbitals() const { return static_cast<int>(one_body.rows()); }
};

class LinearDependenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kMaxOverlapCondition = 1e10;

struct LowdinResult {
  Eigen::MatrixXd coefficients;  // S^(-1/2)
  MolecularTensors tensors;
};

/// Symmetric orthogonalization C = S^(-1/2). Throws LinearDependenceError
/// when cond(S) exceeds 1e10.
LowdinResult lowdin_orbitals(const IntegralTables& tables);

/// Orthogonal R = exp(kappa) from an antisymmetric generator.
struct OrbitalRotation {
  Eigen::MatrixXd kappa;
  Eigen::MatrixXd R;

  static OrbitalRotation identity(int n);
  static OrbitalRotation from_generator(const Eigen::MatrixXd& kappa);
};

/// Antisymmetric matrix from its strictly-lower-triangle entries, ordered
/// (1,0), (2,0), (2,1), (3,0), ...
Eigen::MatrixXd generator_from_vector(const Eigen::VectorXd& v, int n);
Eigen::VectorXd vector_from_generator(const Eigen::MatrixXd& kappa);

/// New orbitals phi'_j = sum_i phi_i R_ij: h' = R^T h R and the same on all
/// four indices of (pq|rs).
MolecularTensors rotate_orbitals(const MolecularTensors& t, const Eigen::MatrixXd& R);
MolecularTensors rotate_orbitals(const MolecularTensors& t, const OrbitalRotation& rot);

/// Re-indexes atom-localized orbitals so that pair p owns orbitals 2p
/// (first atom of the pair) and 2p + 1 (second atom).
MolecularTensors pair_ordered(const MolecularTensors& t, const PairMatching& matching);
std::vector<int> pair_orbital_order(const PairMatching& matching);

/// Generator of the per-pair bonding/antibonding guess orbitals
/// (a + b)/sqrt2 and (b - a)/sqrt2 in the pair-ordered basis.
Eigen::MatrixXd pair_guess_generator(int n_orbitals);

/// Jordan-Wigner image of a pair-ordered Hamiltonian. Orbital o maps to
/// qubits 2o (spin up) and 2o + 1 (spin down); qubit value 1 = occupied.
PauliPolynomial to_qubit(const MolecularTensors& t);
PauliPolynomial to_qubit(const MolecularTensors& t, const PairMatching& matching);

/// Pair-ordered Lowdin tensors for a geometry: integrals, orthogonalization
/// and pair re-indexing in one call.
MolecularTensors molecular_tensors(const Geometry& geom, const PairMatching& matching);

}  // namespace spapred
