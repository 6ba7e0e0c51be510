#pragma once

#include "mlsg/model.hpp"

namespace mlsg {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// First/second moment estimates mirror the parameter tensors.
struct AdamState {
  ModelParams m, v;
  long step = 0;

  static AdamState make(const ModelParams& params) {
    return AdamState{zeros_like(params), zeros_like(params), 0};
  }
};

/// Bias-corrected Adam update: theta <- theta - lr * mhat / (sqrt(vhat) + eps).
/// Throws NumericError on non-finite gradients.
void adam_step(ModelParams& params, const ModelParams& grads, AdamState& state,
               const AdamConfig& config);

}  // namespace mlsg
