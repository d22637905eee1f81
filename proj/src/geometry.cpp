#include "spapred/geometry.hpp"

#include "spapred/rng.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace spapred {

std::string to_string(GeometryKind kind) {
  switch (kind) {
    case GeometryKind::kRandom:
      return "random";
    case GeometryKind::kLinear:
      return "linear";
    case GeometryKind::kRing:
      return "ring";
  }
  return "unknown";
}

GeometryKind parse_geometry_kind(std::string_view name) {
  if (name == "random") return GeometryKind::kRandom;
  if (name == "linear") return GeometryKind::kLinear;
  if (name == "ring") return GeometryKind::kRing;
  throw std::invalid_argument("unknown geometry kind: " + std::string(name));
}

double Geometry::min_pair_distance() const {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < size(); ++i)
    for (int j = i + 1; j < size(); ++j) best = std::min(best, distance(i, j));
  return best;
}

Geometry Geometry::scaled(double factor) const {
  Geometry out = *this;
  for (auto& r : out.coords) r *= factor;
  out.step *= factor;
  return out;
}

Geometry Geometry::permuted(const std::vector<int>& new_to_old) const {
  if (static_cast<int>(new_to_old.size()) != size())
    throw std::invalid_argument("permutation size mismatch");
  Geometry out = *this;
  for (int i = 0; i < size(); ++i) out.coords[i] = coords.at(new_to_old[i]);
  return out;
}

double SweepSchedule::step(int k) const {
  validate();
  if (k < 0 || k > T - 1)
    throw std::invalid_argument("sweep index k out of range [0, T-1]");
  if (k == T - 1) return d_max;
  return d_min + (d_max - d_min) * static_cast<double>(k) / (T - 1);
}

void SweepSchedule::validate() const {
  if (T < 2) throw std::invalid_argument("sweep needs T >= 2");
  if (!(d_min < d_max)) throw std::invalid_argument("sweep needs d_min < d_max");
  if (n_atoms < 1) throw std::invalid_argument("sweep needs n_atoms >= 1");
}

Geometry generate_random(int n, double d_max, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("generate_random: n must be >= 1");
  if (n >= 2 && !(d_max > kMinSeparation))
    throw std::invalid_argument("generate_random: d_max must exceed 0.5 A");

  Geometry geom;
  geom.kind = GeometryKind::kRandom;
  geom.seed = seed;
  geom.coords.reserve(n);
  geom.coords.emplace_back(0.0, 0.0, 0.0);

  for (int i = 1; i < n; ++i) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(i));
    const Eigen::Vector3d prev = geom.coords[rng.index(geom.coords.size())];
    long rejections = 0;
    while (true) {
      const double ux = rng.uniform();
      const double uy = rng.uniform();
      const double uz = rng.uniform();
      const Eigen::Vector3d candidate = prev + d_max * Eigen::Vector3d(ux, uy, uz);
      double closest = std::numeric_limits<double>::infinity();
      for (const auto& r : geom.coords) closest = std::min(closest, (candidate - r).norm());
      if (closest > kMinSeparation) {
        geom.coords.push_back(candidate);
        break;
      }
      if (++rejections >= kMaxConsecutiveRejections)
        throw GenerationError("generate_random: rejection cap reached for atom " +
                              std::to_string(i) + " (d_max too small?)");
    }
  }
  return geom;
}

Geometry generate_linear(const SweepSchedule& sched, int k) {
  const double step = sched.step(k);
  Geometry geom;
  geom.kind = GeometryKind::kLinear;
  geom.step = step;
  geom.coords.reserve(sched.n_atoms);
  for (int i = 0; i < sched.n_atoms; ++i) geom.coords.emplace_back(0.0, 0.0, i * step);
  return geom;
}

Geometry generate_ring(const SweepSchedule& sched, int k) {
  if (sched.n_atoms < 3) throw std::invalid_argument("generate_ring: n must be >= 3");
  const double step = sched.step(k);
  const int n = sched.n_atoms;
  const double radius = step / (2.0 * std::sin(std::numbers::pi / n));
  Geometry geom;
  geom.kind = GeometryKind::kRing;
  geom.step = step;
  geom.coords.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double phi = 2.0 * std::numbers::pi * i / n;
    geom.coords.emplace_back(radius * std::cos(phi), radius * std::sin(phi), 0.0);
  }
  return geom;
}

}  // namespace spapred
