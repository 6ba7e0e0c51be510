#pragma once

#include <functional>

#include "mlsg/adam.hpp"
#include "mlsg/model.hpp"

namespace mlsg {

/// All training hyperparameters (the Eq. 16 weights, layer sizes, schedule).
struct TrainConfig {
  double lr = 5e-4;
  double weight_decay = 5e-3;
  double alpha = 0.0;
  double beta = 0.0;
  int nhid1 = 512;
  int nhid2 = 128;
  int attention_hidden = 64;
  double dropout = 0.5;
  int max_epochs = 500;
  int patience = 100;
  std::uint64_t seed = 0;
  double l21_epsilon = 1e-8;
  bool relu_output = false;
  // comparison-harness switches
  bool skip_regularizers = false;
  bool skip_weight_decay = false;

  ObjectiveConfig objective() const {
    return ObjectiveConfig{alpha, beta, l21_epsilon, skip_regularizers};
  }

  void validate() const;
};

struct EpochStats {
  int epoch = 0;  // 1-based
  LossTerms loss;
  double train_acc = 0.0, val_acc = 0.0, test_acc = 0.0;
};

struct TrainResult {
  ModelParams model;  // parameters at the best validation accuracy
  std::vector<EpochStats> history;
  int best_epoch = 0;  // 0 when no epoch ran
  double best_val_acc = 0.0;
  double best_test_acc = 0.0;
};

/// Called once per epoch with the training-mode pass (loss source) and the
/// evaluation pass (accuracy source).
using EpochObserver =
    std::function<void(const EpochStats&, const ForwardResult& train_pass,
                       const ForwardResult& eval_pass)>;

/// Full-batch Adam training with early stopping on validation accuracy.
/// Deterministic given (init, inputs, config) in single-threaded mode.
TrainResult train(const ModelParams& init, const GraphInputs& inputs, const TrainConfig& config,
                  const EpochObserver& observer = {});

/// history.tsv column order: epoch L0 La Lb L train_acc val_acc test_acc.
std::vector<std::string> history_header();
std::vector<std::string> history_row(const EpochStats& e);

}  // namespace mlsg
