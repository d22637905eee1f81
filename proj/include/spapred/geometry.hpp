#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace spapred {

enum class GeometryKind { kRandom, kLinear, kRing };

std::string to_string(GeometryKind kind);
GeometryKind parse_geometry_kind(std::string_view name);

/// Ordered hydrogen coordinates in Angstrom.
struct Geometry {
  std::vector<Eigen::Vector3d> coords;
  GeometryKind kind = GeometryKind::kRandom;
  std::uint64_t seed = 0;  // random kind only
  double step = 0.0;       // linear and ring kinds only, Angstrom

  int size() const { return static_cast<int>(coords.size()); }
  double distance(int i, int j) const { return (coords[i] - coords[j]).norm(); }
  double min_pair_distance() const;
  Geometry scaled(double factor) const;
  Geometry permuted(const std::vector<int>& new_to_old) const;
};

/// Parameters of a structured distance sweep: T evenly spaced bond lengths
/// from d_min to d_max inclusive.
struct SweepSchedule {
  int n_atoms = 0;
  int T = 2;
  double d_min = 0.5;
  double d_max = 4.0;

  double step(int k) const;
  void validate() const;
};

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kMinSeparation = 0.5;        // Angstrom
inline constexpr long kMaxConsecutiveRejections = 1000000;

/// Grows a random cluster from the origin. Each new atom is a displacement
/// d_max * u, u ~ U([0,1]^3), from an existing atom chosen uniformly; the
/// candidate is resampled until it is more than 0.5 A from every atom.
/// Atom i draws from its own stream Rng::stream(seed, i).
Geometry generate_random(int n, double d_max, std::uint64_t seed);

/// Atoms on the z axis with spacing sched.step(k).
Geometry generate_linear(const SweepSchedule& sched, int k);

/// Regular polygon in the xy plane with edge length sched.step(k).
Geometry generate_ring(const SweepSchedule& sched, int k);

}  // namespace spapred
