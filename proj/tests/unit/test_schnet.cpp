#include "gradcheck.hpp"

#include "spapred/nn/schnet.hpp"

#include <Eigen/Geometry>
#include <gtest/gtest.h>

#include <numeric>

using namespace spapred;
using namespace spapred::nn;

namespace {

Geometry transformed(const Geometry& g, std::uint64_t seed) {
  Rng rng(seed);
  const Eigen::Vector3d axis =
      Eigen::Vector3d(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)).normalized();
  const Eigen::Matrix3d R = Eigen::AngleAxisd(rng.uniform(0, 6.28), axis).toRotationMatrix();
  const Eigen::Vector3d shift(rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3));
  Geometry out = g;
  for (auto& c : out.coords) c = R * c + shift;
  return out;
}

ModelConfig config(HeadKind head, std::uint64_t seed = 1) {
  ModelConfig c;
  c.head = head;
  c.seed = seed;
  return c;
}

}  // namespace

TEST(Rbf, PeaksAtCenters) {
  const ModelConfig c;
  const double spacing = c.rbf_cutoff / (c.rbf_count - 1);
  for (int k : {0, 7, 49}) EXPECT_NEAR(rbf_expand(k * spacing, c)[k], 1.0, 1e-15);
  const auto r0 = rbf_expand(0.0, c);
  EXPECT_EQ(r0.size(), 50);
  EXPECT_EQ(r0[0], 1.0);
  for (int k = 1; k < 50; ++k) EXPECT_LE(r0[k], r0[k - 1]);
  EXPECT_LT(r0[5], r0[4]);
}

TEST(Rbf, ContinuousInDistance) {
  const ModelConfig c;
  for (double d = 0.0; d < 6.0; d += 0.01)
    EXPECT_LT((rbf_expand(d + 1e-6, c) - rbf_expand(d, c)).cwiseAbs().maxCoeff(), 1e-4);
}

TEST(Cutoff, SmoothEnvelope) {
  EXPECT_EQ(cosine_cutoff(0.0, 5.0), 1.0);
  EXPECT_NEAR(cosine_cutoff(2.5, 5.0), 0.5, 1e-15);
  EXPECT_EQ(cosine_cutoff(5.0, 5.0), 0.0);
  EXPECT_EQ(cosine_cutoff(7.0, 5.0), 0.0);
}

TEST(FeaturePack, NormalizationAsWritten) {
  Geometry g;
  g.coords = {{0, 0, 0}, {0, 0, 1}, {5, 0, 0}, {5, 2, 0}};
  const auto m = PairMatching::from_pairs(g, {{0, 1}, {2, 3}});
  const auto f = FeaturePack::build(g, m, config(HeadKind::kLinear));
  // distances 1 and 2: (v - 1) / 2; polar angles 0 and pi/2: v / (pi/2).
  EXPECT_NEAR(f.edge_features(0, 0), 0.0, 1e-15);
  EXPECT_NEAR(f.edge_features(1, 0), 0.5, 1e-15);
  EXPECT_NEAR(f.edge_features(0, 1), 0.0, 1e-15);
  EXPECT_NEAR(f.edge_features(1, 1), 1.0, 1e-15);
  // Cross-pair distances are at or beyond the 5 A cutoff.
  EXPECT_EQ(f.src.size(), 4u);
}

TEST(Backbone, SymmetricAtomsGetIdenticalFeatures) {
  Geometry g;
  g.coords = {{0, 0, -0.4}, {0, 0, 0.4}};
  Model model(config(HeadKind::kMixed));
  const auto x = model.atom_features(g, best_matching(g));
  EXPECT_LT((x.row(0) - x.row(1)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Backbone, ZeroUpdateWeightsGiveBareEmbedding) {
  Model model(config(HeadKind::kLinear));
  for (auto& p : model.parameters())
    if (p.name.find(".lin.") != std::string::npos) p.value.setZero();
  const auto g = generate_random(6, 2.5, 3);
  const auto x = model.atom_features(g, best_matching(g));
  const auto& e = model.parameter("embedding").value;
  for (Eigen::Index i = 0; i < x.rows(); ++i) EXPECT_TRUE(x.row(i).isApprox(e.row(0), 0.0));
}

TEST(Backbone, RigidMotionInvariance) {
  Model model(config(HeadKind::kLinear));
  const auto g = generate_random(8, 2.5, 4);
  const auto m = best_matching(g);
  const auto a = model.atom_features(g, m);
  const auto b = model.atom_features(transformed(g, 9), m);
  EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Heads, OutputCounts) {
  for (auto head : {HeadKind::kLinear, HeadKind::kMixed}) {
    Model model(config(head));
    const auto h2 = generate_linear({2, 2, 0.74, 1.0}, 0);
    EXPECT_EQ(model.predict(h2, best_matching(h2)).size(), 1u);
    const auto h12 = generate_random(12, 2.5, 5);
    EXPECT_EQ(model.predict(h12, best_matching(h12)).size(), 6u);
  }
}

TEST(Heads, PredictionsInvariantUnderRigidMotion) {
  for (auto head : {HeadKind::kLinear, HeadKind::kMixed}) {
    Model model(config(head));
    const auto g = generate_random(6, 2.5, 6);
    const auto m = best_matching(g);
    const auto a = model.predict(g, m);
    const auto b = model.predict(transformed(g, 10), m);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-8);
  }
}

TEST(Heads, H2DependsOnDistanceOnly) {
  Model model(config(HeadKind::kMixed));
  Geometry a, b;
  a.coords = {{0, 0, 0}, {0, 0, 0.9}};
  b.coords = {{1, 2, 3}, {1 + 0.9 / std::sqrt(3.0), 2 + 0.9 / std::sqrt(3.0), 3 + 0.9 / std::sqrt(3.0)}};
  EXPECT_NEAR(model.predict(a, best_matching(a))[0], model.predict(b, best_matching(b))[0], 1e-10);
}

TEST(Heads, LinearHeadIsOrderSensitive) {
  Model model(config(HeadKind::kLinear));
  const auto g = generate_random(4, 2.5, 7);
  const auto m = best_matching(g);
  const auto f = model.features(g, m);
  Batch fwd = Batch::stack({&f});
  Batch rev = fwd;
  std::swap(rev.pair_a, rev.pair_b);
  Tape t1, t2;
  const auto y1 = t1.value(model.forward(t1, fwd));
  const auto y2 = t2.value(model.forward(t2, rev));
  EXPECT_GT((y1 - y2).cwiseAbs().maxCoeff(), 1e-8);
  // Canonical a < b makes predictions reproducible.
  EXPECT_EQ(model.predict(g, m), model.predict(g, m));
}

TEST(Heads, MixedHeadFollowsAtomRelabeling) {
  Model model(config(HeadKind::kMixed));
  Rng rng(11);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto g = generate_random(8, 2.5, 20 + s);
    const auto m = best_matching(g);
    const auto base = model.predict(g, m);

    std::vector<int> new_to_old(8);
    std::iota(new_to_old.begin(), new_to_old.end(), 0);
    for (int i = 7; i > 0; --i) std::swap(new_to_old[i], new_to_old[rng.index(i + 1)]);
    std::vector<int> old_to_new(8);
    for (int i = 0; i < 8; ++i) old_to_new[new_to_old[i]] = i;
    const auto pg = g.permuted(new_to_old);
    std::vector<std::pair<int, int>> pairs;
    for (auto [a, b] : m.pairs) pairs.emplace_back(old_to_new[a], old_to_new[b]);
    const auto pm = PairMatching::from_pairs(pg, pairs);
    const auto moved = model.predict(pg, pm);

    // Match outputs by pair identity.
    for (int p = 0; p < m.n_pairs(); ++p) {
      const auto [a, b] = m.pairs[p];
      const std::pair<int, int> key{std::min(old_to_new[a], old_to_new[b]),
                                    std::max(old_to_new[a], old_to_new[b])};
      const auto it = std::find(pm.pairs.begin(), pm.pairs.end(), key);
      ASSERT_NE(it, pm.pairs.end());
      EXPECT_NEAR(moved[it - pm.pairs.begin()], base[p], 1e-10);
    }
  }
}

TEST(Model, ParameterCountIsSubMillion) {
  Model model(config(HeadKind::kMixed));
  EXPECT_GT(model.parameter_count(), 28000u);
  EXPECT_LT(model.parameter_count(), 472000u);
}

TEST(Model, SeedDeterminesInitialization) {
  Model a(config(HeadKind::kMixed, 5)), b(config(HeadKind::kMixed, 5)), c(config(HeadKind::kMixed, 6));
  EXPECT_EQ(a.parameters()[3].value, b.parameters()[3].value);
  EXPECT_NE(a.parameters()[3].value, c.parameters()[3].value);
}

TEST(Model, ConfigJsonRoundTrip) {
  auto c = config(HeadKind::kLinear, 42);
  c.feature_dim = 16;
  EXPECT_EQ(ModelConfig::from_json(c.to_json()).to_json(), c.to_json());
  EXPECT_THROW(parse_head_kind("gat"), std::invalid_argument);
}

TEST(GradientCheck, FullMixedModelOnH4) {
  const auto g = generate_random(4, 2.5, 8);
  const auto m = best_matching(g);
  Rng rng(12);
  for (std::uint64_t draw = 0; draw < 3; ++draw) {
    Model model(config(HeadKind::kMixed, draw));
    const auto f = model.features(g, m);
    const Batch batch = Batch::stack({&f});
    const Matrix target = Matrix::Random(2, 1);
    const auto r = spapred::testing::check_model_gradient(model, batch, target, rng);
    EXPECT_LT(r.worst(), 1e-4) << "draw " << draw;
  }
}

TEST(GradientCheck, EveryCoordinateOfSmallModel) {
  ModelConfig c = config(HeadKind::kMixed, 3);
  c.feature_dim = 8;
  c.rbf_count = 6;
  c.head_hidden = 8;
  Model model(c);
  const auto g1 = generate_random(4, 2.5, 9), g2 = generate_random(6, 2.5, 10);
  const auto f1 = model.features(g1, best_matching(g1));
  const auto f2 = model.features(g2, best_matching(g2));
  const Batch batch = Batch::stack({&f1, &f2});
  Rng rng(13);
  const auto r = spapred::testing::check_model_gradient(model, batch, Matrix::Random(5, 1), rng, 4, -1);
  EXPECT_LT(r.worst(), 1e-4);
}
