#pragma once

#include "spapred/hamiltonian.hpp"

#include <Eigen/Core>

#include <vector>

namespace spapred {

struct OrbitalOptOptions {
  int cycles = 2;
  double fd_step = 1e-4;
  int max_iterations = 200;       // per BFGS sub-problem
  double kappa_tolerance = 1e-6;  // infinity norm of the central-difference gradient
  double theta_tolerance = 1e-8;
};

struct OrbitalOptResult {
  Eigen::MatrixXd kappa;  // generator relative to the pair-ordered Lowdin basis
  std::vector<double> theta;
  double energy = 0.0;
  MolecularTensors rotated;
};

/// Alternates SPA angle minimization at fixed orbitals with minimization
/// over the rotation generator kappa at fixed angles. Energies come from
/// spa_energy; kappa gradients are central differences.
OrbitalOptResult optimize_orbitals(const MolecularTensors& base, const Eigen::MatrixXd& kappa0,
                                   std::vector<double> theta0, const OrbitalOptOptions& opts = {});

/// Angle-only minimization of spa_energy at fixed orbitals.
std::vector<double> optimize_angles(const MolecularTensors& t, std::vector<double> theta0,
                                    int max_iterations = 200, double tolerance = 1e-8);

}  // namespace spapred
