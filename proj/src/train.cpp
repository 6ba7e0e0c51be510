#include "mlsg/train.hpp"

#include <cmath>

#include "mlsg/io.hpp"

namespace mlsg {

void TrainConfig::validate() const {
  if (lr <= 0.0) throw DomainError("TrainConfig: lr must be positive");
  if (weight_decay < 0.0) throw DomainError("TrainConfig: negative weight_decay");
  if (alpha < 0.0 || beta < 0.0) throw DomainError("TrainConfig: alpha/beta must be >= 0");
  if (dropout < 0.0 || dropout >= 1.0) throw DomainError("TrainConfig: dropout must be in [0,1)");
  if (max_epochs < 0) throw DomainError("TrainConfig: negative max_epochs");
  if (patience < 1 || patience > std::max(max_epochs, 1))
    throw DomainError("TrainConfig: need 1 <= patience <= max_epochs");
  if (nhid1 < 1 || nhid2 < 1 || attention_hidden < 1)
    throw DomainError("TrainConfig: hidden sizes must be positive");
  if (l21_epsilon < 0.0) throw DomainError("TrainConfig: negative l21_epsilon");
}

TrainResult train(const ModelParams& init, const GraphInputs& inputs, const TrainConfig& config,
                  const EpochObserver& observer) {
  config.validate();
  const ObjectiveConfig objective = config.objective();

  TrainResult result;
  result.model = init;
  ModelParams params = init;
  AdamState adam = AdamState::make(params);
  const AdamConfig adam_cfg{config.lr, 0.9, 0.999, 1e-8};
  SplitMix64 dropout_rng = SplitMix64::stream(config.seed, 0x64726f70, 1);

  double best_val = -1.0;
  int since_best = 0;
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    ForwardResult fwd = forward_full(params, inputs, objective, true, &dropout_rng);
    if (!std::isfinite(fwd.loss.total))
      throw NumericError("training diverged at epoch " + std::to_string(epoch));
    ModelParams grads = backward_full(params, inputs, fwd, objective,
                                      config.skip_weight_decay ? 0.0 : config.weight_decay);
    adam_step(params, grads, adam, adam_cfg);

    ForwardResult eval = forward_full(params, inputs, objective, false, nullptr);
    EpochStats stats;
    stats.epoch = epoch;
    stats.loss = fwd.loss;
    stats.train_acc = evaluate_accuracy(eval.predictions, inputs.labels, inputs.splits.train);
    stats.val_acc = inputs.splits.val.empty()
                        ? stats.train_acc
                        : evaluate_accuracy(eval.predictions, inputs.labels, inputs.splits.val);
    stats.test_acc = inputs.splits.test.empty()
                         ? 0.0
                         : evaluate_accuracy(eval.predictions, inputs.labels, inputs.splits.test);
    result.history.push_back(stats);
    if (observer) observer(stats, fwd, eval);

    if (stats.val_acc > best_val) {
      best_val = stats.val_acc;
      since_best = 0;
      result.model = params;
      result.best_epoch = epoch;
      result.best_val_acc = stats.val_acc;
      result.best_test_acc = stats.test_acc;
    } else if (++since_best >= config.patience) {
      break;
    }
  }
  return result;
}

std::vector<std::string> history_header() {
  return {"epoch", "L0", "La", "Lb", "L", "train_acc", "val_acc", "test_acc"};
}

std::vector<std::string> history_row(const EpochStats& e) {
  return {std::to_string(e.epoch),      format_double(e.loss.l0),
          format_double(e.loss.reg_a),  format_double(e.loss.reg_b),
          format_double(e.loss.total),  format_double(e.train_acc),
          format_double(e.val_acc),     format_double(e.test_acc)};
}

}  // namespace mlsg
