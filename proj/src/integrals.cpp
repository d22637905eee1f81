#include "spapred/integrals.hpp"

#include <cmath>
#include <numbers>

namespace spapred {

namespace {

constexpr double kPi = std::numbers::pi;

// Primitive overlap of unnormalized s Gaussians with exponents a, b.
double prim_overlap(double a, double b, double r2) {
  const double p = a + b;
  return std::pow(kPi / p, 1.5) * std::exp(-a * b / p * r2);
}

double contracted_overlap(const ContractedGaussian& f, const ContractedGaussian& g) {
  const double r2 = (f.center - g.center).squaredNorm();
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      s += f.coefficients[i] * g.coefficients[j] * prim_overlap(f.exponents[i], g.exponents[j], r2);
  return s;
}

}  // namespace

double boys_f0(double x) {
  if (x < 1e-10) return 1.0 - x / 3.0 + x * x / 10.0;
  const double t = std::sqrt(x);
  return 0.5 * std::sqrt(kPi / x) * std::erf(t);
}

BasisSet build_basis_bohr(std::span<const Eigen::Vector3d> centers_bohr) {
  BasisSet basis;
  for (const auto& c : centers_bohr) {
    ContractedGaussian f;
    f.center = c;
    f.exponents = kHydrogenExponents;
    for (int i = 0; i < 3; ++i)
      f.coefficients[i] =
          kHydrogenCoefficients[i] * std::pow(2.0 * kHydrogenExponents[i] / kPi, 0.75);
    const double norm = std::sqrt(contracted_overlap(f, f));
    for (auto& c_i : f.coefficients) c_i /= norm;
    basis.functions.push_back(f);
    basis.nuclei.push_back(c);
  }
  return basis;
}

BasisSet build_basis(const Geometry& geom) {
  std::vector<Eigen::Vector3d> centers;
  centers.reserve(geom.coords.size());
  for (const auto& r : geom.coords) centers.push_back(r * kBohrPerAngstrom);
  return build_basis_bohr(centers);
}

IntegralTables compute_integrals(const BasisSet& basis) {
  const int n = basis.size();
  IntegralTables t;
  t.overlap = Eigen::MatrixXd::Zero(n, n);
  t.kinetic = Eigen::MatrixXd::Zero(n, n);
  t.nuclear = Eigen::MatrixXd::Zero(n, n);
  t.eri = FourIndex(n);

  // Gaussian product data for every primitive pair of every function pair.
  struct Prim {
    double p;        // combined exponent
    double k;        // coefficient product times exp(-ab/p |AB|^2)
    Eigen::Vector3d center;
  };
  std::vector<std::vector<Prim>> pairs(static_cast<std::size_t>(n) * n);

  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const auto& fa = basis.functions[a];
      const auto& fb = basis.functions[b];
      const double r2 = (fa.center - fb.center).squaredNorm();
      double s = 0.0, kin = 0.0, nuc = 0.0;
      auto& plist = pairs[static_cast<std::size_t>(a) * n + b];
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          const double x = fa.exponents[i];
          const double y = fb.exponents[j];
          const double p = x + y;
          const double mu = x * y / p;
          const double cc = fa.coefficients[i] * fb.coefficients[j];
          const double k = cc * std::exp(-mu * r2);
          const Eigen::Vector3d center = (x * fa.center + y * fb.center) / p;
          const double sij = std::pow(kPi / p, 1.5);
          s += k * sij;
          kin += k * mu * (3.0 - 2.0 * mu * r2) * sij;
          for (const auto& nucleus : basis.nuclei)
            nuc -= k * 2.0 * kPi / p * boys_f0(p * (center - nucleus).squaredNorm());
          plist.push_back({p, k, center});
        }
      }
      t.overlap(a, b) = s;
      t.kinetic(a, b) = kin;
      t.nuclear(a, b) = nuc;
    }
  }

  const double pref = 2.0 * std::pow(kPi, 2.5);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b <= a; ++b) {
      const auto& ab = pairs[static_cast<std::size_t>(a) * n + b];
      for (int c = 0; c < n; ++c) {
        for (int d = 0; d <= c; ++d) {
          if (c * (c + 1) / 2 + d > a * (a + 1) / 2 + b) continue;
          const auto& cd = pairs[static_cast<std::size_t>(c) * n + d];
          double v = 0.0;
          for (const auto& P : ab) {
            for (const auto& Q : cd) {
              const double pq = P.p + Q.p;
              const double rho = P.p * Q.p / pq;
              v += P.k * Q.k * pref / (P.p * Q.p * std::sqrt(pq)) *
                   boys_f0(rho * (P.center - Q.center).squaredNorm());
            }
          }
          // 8-fold permutational symmetry of real orbitals.
          t.eri(a, b, c, d) = v;
          t.eri(b, a, c, d) = v;
          t.eri(a, b, d, c) = v;
          t.eri(b, a, d, c) = v;
          t.eri(c, d, a, b) = v;
          t.eri(d, c, a, b) = v;
          t.eri(c, d, b, a) = v;
          t.eri(d, c, b, a) = v;
        }
      }
    }
  }

  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      t.nuclear_repulsion += 1.0 / (basis.nuclei[i] - basis.nuclei[j]).norm();
  return t;
}

}  // namespace spapred
