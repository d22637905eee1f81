#pragma once

#include "spapred/geometry.hpp"

#include <Eigen/Core>

#include <array>
#include <span>
#include <vector>

namespace spapred {

inline constexpr double kBohrPerAngstrom = 1.8897259886;

/// Dense (ab|cd) tensor in chemists' notation, row-major over four indices.
class FourIndex {
 public:
  FourIndex() = default;
  explicit FourIndex(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n * n, 0.0) {}

  int dim() const { return n_; }
  double& operator()(int a, int b, int c, int d) { return data_[index(a, b, c, d)]; }
  double operator()(int a, int b, int c, int d) const { return data_[index(a, b, c, d)]; }
  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

 private:
  std::size_t index(int a, int b, int c, int d) const {
    return ((static_cast<std::size_t>(a) * n_ + b) * n_ + c) * n_ + d;
  }
  int n_ = 0;
  std::vector<double> data_;
};

/// Contracted s-type Gaussian. Coefficients already include the primitive
/// normalization (2a/pi)^(3/4) and the overall contraction normalization.
struct ContractedGaussian {
  Eigen::Vector3d center;  // bohr
  std::array<double, 3> exponents;
  std::array<double, 3> coefficients;
};

struct BasisSet {
  std::vector<ContractedGaussian> functions;
  std::vector<Eigen::Vector3d> nuclei;  // bohr, unit charge

  int size() const { return static_cast<int>(functions.size()); }
};

/// Three-primitive fit to a Slater 1s with zeta = 1.24 (the usual minimal
/// hydrogen basis).
inline constexpr std::array<double, 3> kHydrogenExponents = {3.42525091, 0.62391373, 0.16885540};
inline constexpr std::array<double, 3> kHydrogenCoefficients = {0.15432897, 0.53532814,
                                                                0.44463454};

BasisSet build_basis(const Geometry& geom);
BasisSet build_basis_bohr(std::span<const Eigen::Vector3d> centers_bohr);

struct IntegralTables {
  Eigen::MatrixXd overlap;
  Eigen::MatrixXd kinetic;
  Eigen::MatrixXd nuclear;  // attraction to all nuclei
  FourIndex eri;
  double nuclear_repulsion = 0.0;

  Eigen::MatrixXd core() const { return kinetic + nuclear; }
};

/// Zeroth Boys function F0(x) = 1/2 sqrt(pi/x) erf(sqrt(x)).
double boys_f0(double x);

IntegralTables compute_integrals(const BasisSet& basis);

}  // namespace spapred
