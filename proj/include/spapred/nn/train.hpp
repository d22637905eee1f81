#pragma once

#include "spapred/nn/schnet.hpp"
#include "spapred/pipeline.hpp"

#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

namespace spapred::nn {

struct EpochStats {
  int epoch = 0;
  double train_loss = 0.0;
  std::optional<double> val_loss;  // absent without a validation split
  double wall_time = 0.0;          // seconds since training started
};

struct TrainOptions {
  double learning_rate = 1e-3;
  int batch_size = 16;
  int epochs = 100;
  std::uint64_t seed = 0;  // validation split and per-epoch shuffles
  double validation_fraction = 0.1;
  double lr_decay = 1.0;   // learning rate multiplier applied after each epoch
  bool keep_best = true;   // return the parameters with the lowest validation loss
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::function<void(const EpochStats&)> on_epoch;

  void validate() const;
  nlohmann::json to_json() const;
};

class Adam {
 public:
  Adam(const std::vector<Parameter>& params, double lr, double beta1, double beta2, double eps);
  void step(std::vector<Parameter>& params);
  void set_learning_rate(double lr) { lr_ = lr; }
  double learning_rate() const { return lr_; }

 private:
  double lr_, beta1_, beta2_, eps_;
  long t_ = 0;
  std::vector<Matrix> m_, v_;
};

struct TrainResult {
  Model model;
  std::vector<EpochStats> log;
  int best_epoch = -1;
  std::size_t n_train = 0;
  std::size_t n_validation = 0;
  std::size_t skipped_unconverged = 0;
};

/// Fits predicted pair angles to the stored angles with Adam on the mean
/// squared error. Single-threaded with fixed-order reductions, so identical
/// seeds and data give bit-identical parameters. Unconverged records are
/// skipped. Throws DataError on an empty training set and NumericalError on
/// a non-finite loss.
TrainResult train(const std::vector<DatasetRecord>& records, const ModelConfig& cfg,
                  const TrainOptions& opts);

/// CSV with columns epoch, train_loss, val_loss, wall_time.
void write_training_log(const std::vector<EpochStats>& log, const std::filesystem::path& path);

}  // namespace spapred::nn
