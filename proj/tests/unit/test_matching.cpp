#include "spapred/matching.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <limits>

using namespace spapred;

namespace {

using Pairs = std::vector<std::pair<int, int>>;

// Every perfect matching of 0..n-1 as sorted pair lists.
void enumerate(std::vector<int> free, Pairs& cur, std::vector<Pairs>& out) {
  if (free.empty()) {
    Pairs p = cur;
    std::sort(p.begin(), p.end());
    out.push_back(p);
    return;
  }
  const int a = free[0];
  for (std::size_t k = 1; k < free.size(); ++k) {
    std::vector<int> rest;
    for (std::size_t j = 1; j < free.size(); ++j)
      if (j != k) rest.push_back(free[j]);
    cur.emplace_back(a, free[k]);
    enumerate(rest, cur, out);
    cur.pop_back();
  }
}

double weight(const Geometry& g, const Pairs& p) {
  double w = 0;
  for (auto [a, b] : p) w += g.distance(a, b);
  return w;
}

Pairs brute_force(const Geometry& g) {
  std::vector<int> atoms(g.size());
  for (int i = 0; i < g.size(); ++i) atoms[i] = i;
  Pairs cur;
  std::vector<Pairs> all;
  enumerate(atoms, cur, all);
  double best = std::numeric_limits<double>::infinity();
  Pairs arg;
  for (const auto& p : all) {
    const double w = weight(g, p);
    if (w < best) {
      best = w;
      arg = p;
    }
  }
  return arg;
}

}  // namespace

TEST(Matching, H2) {
  const auto m = best_matching(generate_linear({2, 2, 0.74, 1.0}, 0));
  EXPECT_EQ(m.pairs, (Pairs{{0, 1}}));
}

TEST(Matching, LinearH4) {
  const auto m = best_matching(generate_linear({4, 8, 0.5, 4.0}, 0));
  EXPECT_EQ(m.pairs, (Pairs{{0, 1}, {2, 3}}));
  EXPECT_NEAR(m.total_weight, 1.0, 1e-12);
}

TEST(Matching, SquareTieBreak) {
  const auto g = generate_ring({4, 2, 1.0, 2.0}, 0);
  const auto m = best_matching(g);
  EXPECT_EQ(m.pairs, (Pairs{{0, 1}, {2, 3}}));
  EXPECT_NEAR(m.total_weight, 2.0, 1e-12);
  EXPECT_NEAR(weight(g, {{0, 3}, {1, 2}}), 2.0, 1e-12);
  EXPECT_EQ(best_matching(g.scaled(10.0)).pairs, m.pairs);
}

TEST(Matching, AgreesWithBruteForce) {
  for (int n : {4, 6, 8}) {
    for (std::uint64_t s = 0; s < 40; ++s) {
      const auto g = generate_random(n, 2.5, 1000 * n + s);
      const auto m = best_matching(g);
      EXPECT_EQ(m.pairs, brute_force(g)) << "n=" << n << " seed=" << s;
      EXPECT_NEAR(m.total_weight, weight(g, m.pairs), 1e-12);
    }
  }
}

TEST(Matching, ScaleInvariant) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const auto g = generate_random(8, 2.5, s);
    const auto m = best_matching(g).pairs;
    EXPECT_EQ(best_matching(g.scaled(0.1)).pairs, m);
    EXPECT_EQ(best_matching(g.scaled(10.0)).pairs, m);
  }
}

TEST(Matching, RejectsOddOrLarge) {
  EXPECT_THROW(best_matching(generate_random(3, 2.5, 0)), std::invalid_argument);
  const auto big = generate_linear({14, 2, 1.0, 2.0}, 0);
  EXPECT_THROW(best_matching(big), std::invalid_argument);
  const auto greedy = best_matching(big, true);
  EXPECT_EQ(greedy.n_pairs(), 7);
  greedy.validate(14);
}

TEST(Matching, GreedyIsPerfect) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto g = generate_random(10, 2.5, s);
    const auto m = greedy_matching(g);
    m.validate(10);
    EXPECT_GE(m.total_weight, best_matching(g).total_weight - 1e-12);
  }
}

TEST(Matching, FromPairsCanonicalizes) {
  const auto g = generate_linear({4, 2, 1.0, 2.0}, 0);
  const auto m = PairMatching::from_pairs(g, {{3, 2}, {1, 0}});
  EXPECT_EQ(m.pairs, (Pairs{{0, 1}, {2, 3}}));
  EXPECT_THROW(PairMatching::from_pairs(g, {{0, 1}, {1, 2}}), std::invalid_argument);
}

TEST(GlobalEdges, CountsAndDistances) {
  EXPECT_EQ(global_edges(generate_linear({2, 2, 1.0, 2.0}, 0)).size(), 1u);
  const auto edges = global_edges(generate_linear({4, 2, 1.0, 2.0}, 0));
  ASSERT_EQ(edges.size(), 6u);
  std::vector<double> d;
  for (const auto& e : edges) d.push_back(e.distance);
  std::sort(d.begin(), d.end());
  const std::vector<double> expect{1, 1, 1, 2, 2, 3};
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(d[i], expect[i], 1e-12);
}
