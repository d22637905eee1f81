#include "spapred/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace spapred {

namespace {

constexpr double kTieTolerance = 1e-10;

void check_even(int n) {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("matching requires an even atom count >= 2, got " +
                                std::to_string(n));
}

struct Enumerator {
  const Eigen::MatrixXd& w;
  int n;
  std::vector<int> partner;
  std::vector<std::pair<int, int>> current;
  std::vector<std::pair<int, int>> best;
  double best_total = std::numeric_limits<double>::infinity();

  // The lowest free atom is always paired first and partners are tried in
  // increasing order, so complete matchings arrive in lexicographic order of
  // their sorted pair lists. Replacing only on a strict improvement keeps
  // the lexicographically first among tied minima.
  void run(double total) {
    int first = -1;
    for (int i = 0; i < n; ++i) {
      if (partner[i] < 0) {
        first = i;
        break;
      }
    }
    if (first < 0) {
      if (best.empty() ||
          total < best_total - kTieTolerance * std::abs(best_total)) {
        best_total = total;
        best = current;
      }
      return;
    }
    for (int j = first + 1; j < n; ++j) {
      if (partner[j] >= 0) continue;
      partner[first] = j;
      partner[j] = first;
      current.emplace_back(first, j);
      run(total + w(first, j));
      current.pop_back();
      partner[first] = -1;
      partner[j] = -1;
    }
  }
};

}  // namespace

PairMatching PairMatching::from_pairs(const Geometry& geom,
                                      std::vector<std::pair<int, int>> pairs) {
  for (auto& p : pairs)
    if (p.first > p.second) std::swap(p.first, p.second);
  std::sort(pairs.begin(), pairs.end());
  PairMatching m;
  m.pairs = std::move(pairs);
  m.validate(geom.size());
  for (const auto& [a, b] : m.pairs) {
    m.weights.push_back(geom.distance(a, b));
    m.total_weight += m.weights.back();
  }
  return m;
}

void PairMatching::validate(int n_atoms) const {
  check_even(n_atoms);
  if (2 * n_pairs() != n_atoms) throw std::invalid_argument("matching does not cover all atoms");
  std::vector<int> seen(n_atoms, 0);
  for (const auto& [a, b] : pairs) {
    if (a < 0 || b >= n_atoms || a >= b) throw std::invalid_argument("malformed pair in matching");
    if (seen[a]++ || seen[b]++) throw std::invalid_argument("atom matched twice");
  }
}

PairMatching best_matching(const Geometry& geom, bool allow_greedy) {
  const int n = geom.size();
  check_even(n);
  if (n > kExactMatchingLimit) {
    if (!allow_greedy)
      throw std::invalid_argument("exact matching limited to 12 atoms; enable the greedy fallback");
    return greedy_matching(geom);
  }
  Eigen::MatrixXd w(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) w(i, j) = geom.distance(i, j);

  Enumerator e{w, n, std::vector<int>(n, -1), {}, {}};
  e.run(0.0);
  return PairMatching::from_pairs(geom, e.best);
}

PairMatching greedy_matching(const Geometry& geom) {
  const int n = geom.size();
  check_even(n);
  auto edges = global_edges(geom);
  std::stable_sort(edges.begin(), edges.end(),
                   [](const Edge& a, const Edge& b) { return a.distance < b.distance; });
  std::vector<bool> used(n, false);
  std::vector<std::pair<int, int>> pairs;
  for (const auto& e : edges) {
    if (used[e.u] || used[e.v]) continue;
    used[e.u] = used[e.v] = true;
    pairs.emplace_back(e.u, e.v);
  }
  return PairMatching::from_pairs(geom, std::move(pairs));
}

std::vector<Edge> global_edges(const Geometry& geom) {
  std::vector<Edge> edges;
  const int n = geom.size();
  edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) edges.push_back({u, v, geom.distance(u, v)});
  return edges;
}

}  // namespace spapred
