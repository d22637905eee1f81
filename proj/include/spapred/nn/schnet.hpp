#pragma once

#include "spapred/geometry.hpp"
#include "spapred/matching.hpp"
#include "spapred/nn/autodiff.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace spapred::nn {

enum class HeadKind { kLinear, kMixed };

std::string to_string(HeadKind head);
HeadKind parse_head_kind(std::string_view name);

struct ModelConfig {
  int feature_dim = 64;
  int n_interactions = 3;
  int rbf_count = 50;
  double rbf_cutoff = 5.0;  // Angstrom
  HeadKind head = HeadKind::kMixed;
  int head_hidden = 256;
  std::uint64_t seed = 0;

  void validate() const;
  nlohmann::json to_json() const;
  static ModelConfig from_json(const nlohmann::json& j);
};

/// Gaussian expansion exp(-gamma (d - mu_k)^2), centers evenly spaced on
/// [0, cutoff], gamma = 1 / (2 spacing^2).
Eigen::RowVectorXd rbf_expand(double d, const ModelConfig& cfg);

/// 0.5 (cos(pi d / cutoff) + 1) inside the cutoff, 0 outside.
double cosine_cutoff(double d, double cutoff);

/// Per-molecule graph inputs. For the mixed head the atoms are first
/// reordered pair-blocked (pair p occupies atoms 2p, 2p+1).
struct FeaturePack {
  int n_atoms = 0;
  std::vector<Eigen::Vector3d> positions;
  // Directed neighbor edges j -> i, i != j, d_ij < cutoff.
  std::vector<int> src, dst;
  std::vector<double> distance;
  Matrix edge_rbf;
  Eigen::VectorXd envelope;
  // Matched edges in pair-list order, a < b.
  std::vector<std::pair<int, int>> pairs;
  Matrix pair_rbf;
  /// (distance, polar angle to z) per matched edge, each column mapped by
  /// v <- (v - min v) / max v. Kept for inspection; the heads use distances.
  Matrix edge_features;

  static FeaturePack build(const Geometry& geom, const PairMatching& matching,
                           const ModelConfig& cfg);
};

/// Several molecules stacked into one disconnected graph.
struct Batch {
  int n_atoms = 0;
  std::vector<int> src, dst;
  Matrix edge_rbf;
  Eigen::VectorXd envelope;
  std::vector<int> pair_a, pair_b;
  Matrix pair_rbf;
  std::vector<int> pair_offsets;  // molecule m owns outputs [off[m], off[m+1])

  static Batch stack(const std::vector<const FeaturePack*>& packs);
  int n_pairs() const { return static_cast<int>(pair_a.size()); }
};

/// SchNet backbone with a single-species embedding, followed by either the
/// linear head (concat(x_a, x_b, rbf(d_ab)), canonical a < b) or the mixed
/// head (concat(x_a + x_b, x_a * x_b, rbf(d_ab)), symmetric in a and b).
class Model {
 public:
  explicit Model(const ModelConfig& cfg);

  const ModelConfig& config() const { return config_; }
  std::vector<Parameter>& parameters() { return params_; }
  const std::vector<Parameter>& parameters() const { return params_; }
  Parameter& parameter(const std::string& name);
  std::size_t parameter_count() const;
  void zero_grad();

  /// n_atoms x F per-atom features.
  Var backbone(Tape& tape, const Batch& batch);
  /// n_pairs x 1 angles.
  Var head(Tape& tape, const Batch& batch, Var features);
  Var forward(Tape& tape, const Batch& batch);

  /// Mean squared angle error; with accumulate_grad the parameter gradients
  /// of that loss are added to each Parameter::grad.
  double loss(const Batch& batch, const Matrix& targets, bool accumulate_grad);

  FeaturePack features(const Geometry& geom, const PairMatching& matching) const;
  std::vector<double> predict(const Geometry& geom, const PairMatching& matching);
  Matrix atom_features(const Geometry& geom, const PairMatching& matching);

 private:
  Parameter& add(std::string name, int rows, int cols, double bound);

  ModelConfig config_;
  std::vector<Parameter> params_;
};

}  // namespace spapred::nn
