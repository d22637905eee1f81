#include "spapred/errors.hpp"
#include "spapred/fci.hpp"
#include "spapred/pipeline.hpp"
#include "spapred/spa.hpp"

#include <gtest/gtest.h>

using namespace spapred;
using nlohmann::json;

namespace {

Geometry h2(double d) { return generate_linear({2, 2, d, d + 1.0}, 0); }

}  // namespace

TEST(Label, H2IsExact) {
  const auto r = label_instance(h2(0.7414));
  ASSERT_TRUE(r.e_fci.has_value());
  EXPECT_NEAR(r.e_spa, *r.e_fci, 1e-6);
  // Minimal-basis H2 ground state near equilibrium.
  EXPECT_NEAR(*r.e_fci, -1.1373, 1e-4);
  EXPECT_EQ(r.theta.size(), 1u);
  EXPECT_TRUE(r.converged);
}

TEST(Label, H2WithoutOrbitalOptimization) {
  LabelConfig c;
  c.orbital_optimization = false;
  const auto r = label_instance(h2(1.2), c);
  EXPECT_NEAR(r.e_spa, *r.e_fci, 1e-6);
}

TEST(Label, VariationalChainOnRandomClusters) {
  for (int n : {4, 6}) {
    for (std::uint64_t s = 0; s < 3; ++s) {
      const auto r = label_instance(generate_random(n, 2.5, 50 + s));
      ASSERT_TRUE(r.e_fci);
      EXPECT_LE(*r.e_fci, r.e_spa + 1e-8);
      EXPECT_LE(r.e_spa, r.reference_energy() + 1e-8);
      EXPECT_TRUE(r.converged);
      for (double g : gradient(r.hamiltonian, SpaAnsatz{r.theta})) EXPECT_LT(std::abs(g), 1e-6);
      EXPECT_TRUE(verify_record(r).ok);
    }
  }
}

TEST(Label, DeterministicPayload) {
  const auto g = generate_random(4, 2.5, 3);
  EXPECT_EQ(payload_hash(label_instance(g)), payload_hash(label_instance(g)));
}

TEST(Label, GradientDescentOption) {
  LabelConfig c;
  c.gradient_descent = true;
  c.max_vqe_iterations = 2000;
  const auto a = label_instance(generate_random(4, 2.5, 4), c);
  const auto b = label_instance(generate_random(4, 2.5, 4));
  EXPECT_NEAR(a.e_spa, b.e_spa, 1e-6);
}

TEST(Label, RejectsOddClusters) {
  EXPECT_THROW(label_instance(generate_random(3, 2.5, 0)), std::invalid_argument);
}

TEST(Record, JsonRoundTrip) {
  auto r = label_instance(generate_random(4, 2.5, 12));
  r.timestamp = "2026-01-01T00:00:00Z";
  const auto back = record_from_json(json::parse(to_jsonl_line(r)));
  EXPECT_EQ(to_jsonl_line(back), to_jsonl_line(r));
  EXPECT_EQ(back.e_spa, r.e_spa);
  EXPECT_EQ(back.theta, r.theta);
  EXPECT_EQ(back.hamiltonian.size(), r.hamiltonian.size());
  EXPECT_TRUE(back.kappa.isApprox(r.kappa, 0.0));
}

TEST(Record, SweepRecordKeepsStep) {
  auto r = label_instance(generate_ring({4, 5, 0.5, 4.0}, 2));
  r.key = 2;
  const auto j = to_json(r);
  EXPECT_EQ(j.at("kind"), "ring");
  EXPECT_EQ(j.at("seed"), 2);
  const auto back = record_from_json(j);
  EXPECT_EQ(back.geometry.step, r.geometry.step);
}

TEST(Record, HashIgnoresTimestamp) {
  auto r = label_instance(generate_random(4, 2.5, 13));
  r.timestamp = "a";
  const auto h = payload_hash(r);
  r.timestamp = "b";
  EXPECT_EQ(payload_hash(r), h);
  r.theta[0] += 1e-9;
  EXPECT_NE(payload_hash(r), h);
}

TEST(Record, SchemaErrors) {
  const auto r = label_instance(generate_random(4, 2.5, 14));
  auto j = to_json(r);
  j["version"] = 99;
  EXPECT_THROW(record_from_json(j), DataError);
  j = to_json(r);
  j.erase("theta");
  EXPECT_THROW(record_from_json(j), DataError);
  j = to_json(r);
  j["pauli_terms"][0][0] = "XX";
  EXPECT_THROW(record_from_json(j), DataError);
  j = to_json(r);
  j["matching"] = json::array({json::array({0, 1}), json::array({1, 2})});
  EXPECT_THROW(record_from_json(j), DataError);
}

TEST(Record, VerifyDetectsTampering) {
  auto r = label_instance(generate_random(4, 2.5, 15));
  EXPECT_TRUE(verify_record(r).ok);
  r.e_spa -= 1e-3;
  const auto check = verify_record(r);
  EXPECT_FALSE(check.ok);
  EXPECT_FALSE(check.violations.empty());
}

TEST(LabelConfig, JsonRoundTrip) {
  LabelConfig c;
  c.orbital_optimization = false;
  c.max_vqe_iterations = 77;
  const auto back = LabelConfig::from_json(c.to_json());
  EXPECT_EQ(back.to_json(), c.to_json());
}
