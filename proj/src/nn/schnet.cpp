#include "spapred/nn/schnet.hpp"

#include "spapred/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace spapred::nn {

std::string to_string(HeadKind head) { return head == HeadKind::kLinear ? "linear" : "mixed"; }

HeadKind parse_head_kind(std::string_view name) {
  if (name == "linear") return HeadKind::kLinear;
  if (name == "mixed") return HeadKind::kMixed;
  throw std::invalid_argument("unknown head '" + std::string(name) + "'");
}

void ModelConfig::validate() const {
  if (feature_dim < 1 || n_interactions < 0 || rbf_count < 2 || head_hidden < 1)
    throw std::invalid_argument("model dimensions must be positive");
  if (!(rbf_cutoff > 0.0)) throw std::invalid_argument("rbf_cutoff must be positive");
}

nlohmann::json ModelConfig::to_json() const {
  return {{"feature_dim", feature_dim}, {"n_interactions", n_interactions},
          {"rbf_count", rbf_count},     {"rbf_cutoff", rbf_cutoff},
          {"head", to_string(head)},    {"head_hidden", head_hidden},
          {"seed", seed}};
}

ModelConfig ModelConfig::from_json(const nlohmann::json& j) {
  ModelConfig c;
  c.feature_dim = j.at("feature_dim").get<int>();
  c.n_interactions = j.at("n_interactions").get<int>();
  c.rbf_count = j.at("rbf_count").get<int>();
  c.rbf_cutoff = j.at("rbf_cutoff").get<double>();
  c.head = parse_head_kind(j.at("head").get<std::string>());
  c.head_hidden = j.at("head_hidden").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.validate();
  return c;
}

Eigen::RowVectorXd rbf_expand(double d, const ModelConfig& cfg) {
  const double spacing = cfg.rbf_cutoff / (cfg.rbf_count - 1);
  const double gamma = 1.0 / (2.0 * spacing * spacing);
  Eigen::RowVectorXd out(cfg.rbf_count);
  for (int k = 0; k < cfg.rbf_count; ++k) {
    const double diff = d - k * spacing;
    out[k] = std::exp(-gamma * diff * diff);
  }
  return out;
}

double cosine_cutoff(double d, double cutoff) {
  return d < cutoff ? 0.5 * (std::cos(std::numbers::pi * d / cutoff) + 1.0) : 0.0;
}

FeaturePack FeaturePack::build(const Geometry& geom, const PairMatching& matching,
                               const ModelConfig& cfg) {
  matching.validate(geom.size());
  FeaturePack f;
  f.n_atoms = geom.size();
  if (cfg.head == HeadKind::kMixed) {
    std::vector<int> order;
    for (const auto& [a, b] : matching.pairs) {
      order.push_back(a);
      order.push_back(b);
    }
    f.positions = geom.permuted(order).coords;
    for (int p = 0; p < matching.n_pairs(); ++p) f.pairs.emplace_back(2 * p, 2 * p + 1);
  } else {
    f.positions = geom.coords;
    f.pairs = matching.pairs;
  }

  std::vector<Eigen::RowVectorXd> rows;
  std::vector<double> env;
  for (int i = 0; i < f.n_atoms; ++i) {
    for (int j = 0; j < f.n_atoms; ++j) {
      if (i == j) continue;
      const double d = (f.positions[i] - f.positions[j]).norm();
      if (d >= cfg.rbf_cutoff) continue;
      f.src.push_back(j);
      f.dst.push_back(i);
      f.distance.push_back(d);
      rows.push_back(rbf_expand(d, cfg));
      env.push_back(cosine_cutoff(d, cfg.rbf_cutoff));
    }
  }
  f.edge_rbf.resize(static_cast<Eigen::Index>(rows.size()), cfg.rbf_count);
  for (std::size_t e = 0; e < rows.size(); ++e) f.edge_rbf.row(e) = rows[e];
  f.envelope = Eigen::Map<const Eigen::VectorXd>(env.data(), static_cast<Eigen::Index>(env.size()));

  const auto n_pairs = static_cast<Eigen::Index>(f.pairs.size());
  f.pair_rbf.resize(n_pairs, cfg.rbf_count);
  f.edge_features.resize(n_pairs, 2);
  for (Eigen::Index p = 0; p < n_pairs; ++p) {
    const Eigen::Vector3d v = f.positions[f.pairs[p].second] - f.positions[f.pairs[p].first];
    const double d = v.norm();
    f.pair_rbf.row(p) = rbf_expand(d, cfg);
    f.edge_features(p, 0) = d;
    f.edge_features(p, 1) = std::acos(std::clamp(v.z() / d, -1.0, 1.0));
  }
  for (Eigen::Index c = 0; c < 2 && n_pairs > 0; ++c) {
    auto col = f.edge_features.col(c);
    const double lo = col.minCoeff();
    const double hi = col.maxCoeff();
    col = hi > 0.0 ? Eigen::VectorXd((col.array() - lo) / hi) : Eigen::VectorXd::Zero(n_pairs);
  }
  return f;
}

Batch Batch::stack(const std::vector<const FeaturePack*>& packs) {
  Batch b;
  Eigen::Index n_edges = 0, n_pairs = 0, n_rbf = 0;
  for (const auto* p : packs) {
    n_edges += static_cast<Eigen::Index>(p->src.size());
    n_pairs += static_cast<Eigen::Index>(p->pairs.size());
    n_rbf = p->pair_rbf.cols();
  }
  b.edge_rbf.resize(n_edges, n_rbf);
  b.envelope.resize(n_edges);
  b.pair_rbf.resize(n_pairs, n_rbf);
  Eigen::Index e = 0, q = 0;
  b.pair_offsets.push_back(0);
  for (const auto* p : packs) {
    for (std::size_t k = 0; k < p->src.size(); ++k) {
      b.src.push_back(p->src[k] + b.n_atoms);
      b.dst.push_back(p->dst[k] + b.n_atoms);
      b.edge_rbf.row(e) = p->edge_rbf.row(k);
      b.envelope[e] = p->envelope[k];
      ++e;
    }
    for (std::size_t k = 0; k < p->pairs.size(); ++k) {
      b.pair_a.push_back(p->pairs[k].first + b.n_atoms);
      b.pair_b.push_back(p->pairs[k].second + b.n_atoms);
      b.pair_rbf.row(q++) = p->pair_rbf.row(k);
    }
    b.n_atoms += p->n_atoms;
    b.pair_offsets.push_back(static_cast<int>(q));
  }
  return b;
}

Model::Model(const ModelConfig& cfg) : config_(cfg) {
  cfg.validate();
  const int F = cfg.feature_dim;
  const int R = cfg.rbf_count;
  const auto bound = [](int fan_in) { return 1.0 / std::sqrt(static_cast<double>(fan_in)); };
  add("embedding", 1, F, std::sqrt(3.0));
  for (int b = 0; b < cfg.n_interactions; ++b) {
    const std::string p = "interaction." + std::to_string(b) + ".";
    add(p + "filter1.weight", R, F, bound(R));
    add(p + "filter1.bias", 1, F, bound(R));
    add(p + "filter2.weight", F, F, bound(F));
    add(p + "filter2.bias", 1, F, bound(F));
    add(p + "lin1.weight", F, F, bound(F));
    add(p + "lin2.weight", F, F, bound(F));
    add(p + "lin2.bias", 1, F, bound(F));
    add(p + "lin.weight", F, F, bound(F));
    add(p + "lin.bias", 1, F, bound(F));
  }
  const int in = 2 * F + R;
  add("head.hidden.weight", in, cfg.head_hidden, bound(in));
  add("head.hidden.bias", 1, cfg.head_hidden, bound(in));
  add("head.out.weight", cfg.head_hidden, 1, bound(cfg.head_hidden));
  add("head.out.bias", 1, 1, bound(cfg.head_hidden));
}

Parameter& Model::add(std::string name, int rows, int cols, double bound) {
  Rng rng = Rng::stream(config_.seed, params_.size());
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.uniform(-bound, bound);
  params_.emplace_back(std::move(name), std::move(m));
  return params_.back();
}

Parameter& Model::parameter(const std::string& name) {
  for (auto& p : params_)
    if (p.name == name) return p;
  throw std::out_of_range("no parameter named " + name);
}

std::size_t Model::parameter_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += static_cast<std::size_t>(p.value.size());
  return n;
}

void Model::zero_grad() {
  for (auto& p : params_) p.zero_grad();
}

Var Model::backbone(Tape& tape, const Batch& batch) {
  Var x = tape.gather_rows(tape.parameter(parameter("embedding")),
                           std::vector<int>(batch.n_atoms, 0));
  if (batch.src.empty()) return x;
  const Var rbf = tape.constant(batch.edge_rbf);
  for (int b = 0; b < config_.n_interactions; ++b) {
    const std::string p = "interaction." + std::to_string(b) + ".";
    Var w = tape.linear(rbf, parameter(p + "filter1.weight"), &parameter(p + "filter1.bias"));
    w = tape.shifted_softplus(w);
    w = tape.linear(w, parameter(p + "filter2.weight"), &parameter(p + "filter2.bias"));
    w = tape.scale_rows(w, batch.envelope);

    Var h = tape.linear(x, parameter(p + "lin1.weight"), nullptr);
    Var msg = tape.hadamard(tape.gather_rows(h, batch.src), w);
    h = tape.scatter_sum_rows(msg, batch.dst, batch.n_atoms);
    h = tape.linear(h, parameter(p + "lin2.weight"), &parameter(p + "lin2.bias"));
    h = tape.shifted_softplus(h);
    h = tape.linear(h, parameter(p + "lin.weight"), &parameter(p + "lin.bias"));
    x = tape.add(x, h);
  }
  return x;
}

Var Model::head(Tape& tape, const Batch& batch, Var features) {
  const Var xa = tape.gather_rows(features, batch.pair_a);
  const Var xb = tape.gather_rows(features, batch.pair_b);
  const Var rbf = tape.constant(batch.pair_rbf);
  Var c = config_.head == HeadKind::kLinear
              ? tape.concat_cols({xa, xb, rbf})
              : tape.concat_cols({tape.add(xa, xb), tape.hadamard(xa, xb), rbf});
  c = tape.linear(c, parameter("head.hidden.weight"), &parameter("head.hidden.bias"));
  c = tape.relu(c);
  return tape.linear(c, parameter("head.out.weight"), &parameter("head.out.bias"));
}

Var Model::forward(Tape& tape, const Batch& batch) {
  return head(tape, batch, backbone(tape, batch));
}

double Model::loss(const Batch& batch, const Matrix& targets, bool accumulate_grad) {
  Tape tape;
  const Var l = tape.mse(forward(tape, batch), targets);
  if (accumulate_grad) tape.backward(l);
  return tape.scalar(l);
}

FeaturePack Model::features(const Geometry& geom, const PairMatching& matching) const {
  return FeaturePack::build(geom, matching, config_);
}

std::vector<double> Model::predict(const Geometry& geom, const PairMatching& matching) {
  const FeaturePack f = features(geom, matching);
  const Batch batch = Batch::stack({&f});
  Tape tape;
  const Matrix& out = tape.value(forward(tape, batch));
  return std::vector<double>(out.data(), out.data() + out.size());
}

Matrix Model::atom_features(const Geometry& geom, const PairMatching& matching) {
  const FeaturePack f = features(geom, matching);
  const Batch batch = Batch::stack({&f});
  Tape tape;
  return tape.value(backbone(tape, batch));
}

}  // namespace spapred::nn
