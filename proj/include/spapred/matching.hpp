#pragma once

#include "spapred/geometry.hpp"

#include <utility>
#include <vector>

namespace spapred {

/// Perfect matching over atom indices. Pairs are stored with a < b and sorted
/// by a; the pair order defines the SPA pair index and the qubit layout.
struct PairMatching {
  std::vector<std::pair<int, int>> pairs;
  std::vector<double> weights;  // Angstrom, one per pair
  double total_weight = 0.0;

  int n_pairs() const { return static_cast<int>(pairs.size()); }
  /// Builds a matching from arbitrary pairs: canonicalizes the order and
  /// fills weights from the geometry.
  static PairMatching from_pairs(const Geometry& geom, std::vector<std::pair<int, int>> pairs);
  /// Throws if this is not a perfect matching of n atoms.
  void validate(int n_atoms) const;
};

struct Edge {
  int u;
  int v;
  double distance;
};

/// Largest atom count solved by exact enumeration; (n-1)!! = 10395 at n = 12.
inline constexpr int kExactMatchingLimit = 12;

/// Minimum-weight perfect matching with weights |r_u - r_v|. Exact for
/// n <= 12. Totals equal within a relative 1e-10 count as tied and the
/// lexicographically smallest sorted pair list wins. Larger systems need
/// allow_greedy, which selects the shortest free edge repeatedly.
PairMatching best_matching(const Geometry& geom, bool allow_greedy = false);

PairMatching greedy_matching(const Geometry& geom);

/// All n(n-1)/2 undirected edges, u < v, in lexicographic order.
std::vector<Edge> global_edges(const Geometry& geom);

}  // namespace spapred
