#pragma once

#include "spapred/pauli.hpp"

#include <Eigen/SparseCore>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace spapred {

class UnsupportedSizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline constexpr int kMaxFciQubits = 16;

/// Restriction of a Pauli polynomial to the basis states with a fixed
/// number of set bits (occupied spin orbitals).
struct ParticleSector {
  std::vector<std::uint64_t> states;  // sorted basis states
  Eigen::SparseMatrix<std::complex<double>> matrix;
};

ParticleSector particle_sector(const PauliPolynomial& H, int n_electrons);

/// Lowest eigenvalue of H in the fixed particle-number sector. Dense
/// diagonalization when the sector has at most 1500 states, Lanczos with
/// full reorthogonalization above. Throws UnsupportedSizeError beyond 16
/// qubits.
double exact_ground_energy(const PauliPolynomial& H, int n_electrons);

/// Lanczos with full reorthogonalization from a fixed-seed start vector;
/// the large-sector path of exact_ground_energy.
double lanczos_lowest_eigenvalue(const Eigen::SparseMatrix<double>& A);

}  // namespace spapred
