#include "spapred/nn/train.hpp"

#include "spapred/errors.hpp"
#include "spapred/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

namespace spapred::nn {

namespace {

constexpr std::uint64_t kSplitStream = 0x53504c4954ULL;
constexpr std::uint64_t kShuffleStream = 0x5348554646ULL;

void shuffle(std::vector<std::size_t>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.index(i)]);
}

struct Example {
  FeaturePack pack;
  std::vector<double> target;
};

std::pair<Batch, Matrix> assemble(const std::vector<Example>& data,
                                  const std::vector<std::size_t>& idx, std::size_t lo,
                                  std::size_t hi) {
  std::vector<const FeaturePack*> packs;
  std::vector<double> targets;
  for (std::size_t k = lo; k < hi; ++k) {
    packs.push_back(&data[idx[k]].pack);
    targets.insert(targets.end(), data[idx[k]].target.begin(), data[idx[k]].target.end());
  }
  Matrix t = Eigen::Map<const Eigen::VectorXd>(targets.data(), static_cast<Eigen::Index>(targets.size()));
  return {Batch::stack(packs), std::move(t)};
}

}  // namespace

void TrainOptions::validate() const {
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning rate must be positive");
  if (batch_size < 1) throw std::invalid_argument("batch size must be at least 1");
  if (epochs < 0) throw std::invalid_argument("epochs must be non-negative");
  if (!(validation_fraction >= 0.0 && validation_fraction < 1.0))
    throw std::invalid_argument("validation fraction must lie in [0, 1)");
}

nlohmann::json TrainOptions::to_json() const {
  return {{"learning_rate", learning_rate}, {"batch_size", batch_size},
          {"epochs", epochs},               {"seed", seed},
          {"validation_fraction", validation_fraction},
          {"lr_decay", lr_decay},           {"keep_best", keep_best},
          {"beta1", beta1},                 {"beta2", beta2},
          {"epsilon", epsilon}};
}

Adam::Adam(const std::vector<Parameter>& params, double lr, double beta1, double beta2, double eps)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
  for (const auto& p : params) {
    m_.push_back(Matrix::Zero(p.value.rows(), p.value.cols()));
    v_.push_back(Matrix::Zero(p.value.rows(), p.value.cols()));
  }
}

void Adam::step(std::vector<Parameter>& params) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const Matrix& g = params[i].grad;
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * g;
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * g.cwiseAbs2();
    params[i].value.array() -=
        lr_ * (m_[i].array() / c1) / ((v_[i].array() / c2).sqrt() + eps_);
  }
}

TrainResult train(const std::vector<DatasetRecord>& records, const ModelConfig& cfg,
                  const TrainOptions& opts) {
  opts.validate();
  TrainResult result{Model(cfg), {}, -1, 0, 0, 0};
  Model& model = result.model;

  std::vector<Example> data;
  for (const auto& r : records) {
    if (!r.converged) {
      ++result.skipped_unconverged;
      continue;
    }
    data.push_back({model.features(r.geometry, r.matching), r.theta});
  }
  if (data.empty()) throw DataError("no converged records to train on");

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  Rng split_rng = Rng::stream(opts.seed, kSplitStream);
  shuffle(order, split_rng);
  const auto n_val = static_cast<std::size_t>(std::floor(opts.validation_fraction * data.size()));
  std::vector<std::size_t> val(order.begin(), order.begin() + n_val);
  std::vector<std::size_t> tr(order.begin() + n_val, order.end());
  std::sort(val.begin(), val.end());
  std::sort(tr.begin(), tr.end());
  result.n_train = tr.size();
  result.n_validation = val.size();

  std::optional<std::pair<Batch, Matrix>> val_batch;
  if (!val.empty()) val_batch = assemble(data, val, 0, val.size());

  Adam adam(model.parameters(), opts.learning_rate, opts.beta1, opts.beta2, opts.epsilon);
  double best_val = std::numeric_limits<double>::infinity();
  std::vector<Parameter> best_params;
  const auto start = std::chrono::steady_clock::now();
  const auto bs = static_cast<std::size_t>(opts.batch_size);

  for (int epoch = 1; epoch <= opts.epochs; ++epoch) {
    Rng rng = Rng::stream(opts.seed, kShuffleStream + static_cast<std::uint64_t>(epoch));
    std::vector<std::size_t> perm = tr;
    shuffle(perm, rng);

    double sq_sum = 0.0;
    double count = 0.0;
    for (std::size_t lo = 0; lo < perm.size(); lo += bs) {
      const auto [batch, targets] = assemble(data, perm, lo, std::min(lo + bs, perm.size()));
      model.zero_grad();
      const double loss = model.loss(batch, targets, true);
      if (!std::isfinite(loss))
        throw NumericalError("non-finite training loss at epoch " + std::to_string(epoch) +
                             ", batch starting at " + std::to_string(lo) + " (lr " +
                             std::to_string(adam.learning_rate()) + ")");
      adam.step(model.parameters());
      sq_sum += loss * static_cast<double>(targets.size());
      count += static_cast<double>(targets.size());
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = sq_sum / count;
    if (val_batch) {
      stats.val_loss = model.loss(val_batch->first, val_batch->second, false);
      if (!std::isfinite(*stats.val_loss))
        throw NumericalError("non-finite validation loss at epoch " + std::to_string(epoch));
      if (opts.keep_best && *stats.val_loss < best_val) {
        best_val = *stats.val_loss;
        best_params = model.parameters();
        result.best_epoch = epoch;
      }
    }
    stats.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.log.push_back(stats);
    if (opts.on_epoch) opts.on_epoch(stats);
    adam.set_learning_rate(adam.learning_rate() * opts.lr_decay);
  }

  if (opts.keep_best && !best_params.empty()) {
    for (std::size_t i = 0; i < best_params.size(); ++i)
      model.parameters()[i].value = best_params[i].value;
  } else {
    result.best_epoch = opts.epochs;
  }
  model.zero_grad();
  return result;
}

void write_training_log(const std::vector<EpochStats>& log, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << "epoch,train_loss,val_loss,wall_time\n";
  os.precision(17);
  for (const auto& s : log) {
    os << s.epoch << ',' << s.train_loss << ',';
    if (s.val_loss) os << *s.val_loss;
    os << ',' << s.wall_time << '\n';
  }
}

}  // namespace spapred::nn
