#pragma once

#include "mlsg/model.hpp"

namespace mlsg {

struct GradCheckBlock {
  std::string name;
  double max_rel_err = 0.0;
  int row = 0, col = 0;      // offending entry
  double analytic = 0.0, numeric = 0.0;
};

struct GradCheckReport {
  std::vector<GradCheckBlock> blocks;  // sorted worst-first
  double max_rel_err = 0.0;
};

/// |a - b| / max(|a|, |b|, 0.01).
double relative_error(double a, double b);

/// True when some pre-activation sits within `margin` of a ReLU kink, which
/// would poison central differences; callers restart from a fresh seed.
bool near_relu_kink(const ForwardResult& fwd, double margin);

/// Central-difference check of `analytic` against the smoothed objective,
/// every scalar parameter probed. Dropout must be disabled.
GradCheckReport compare_gradients(const ModelParams& params, const GraphInputs& inputs,
                                  const ObjectiveConfig& objective, const ModelParams& analytic,
                                  double step = 1e-5);

/// Runs backward_full (no weight decay) and compares it per parameter block.
GradCheckReport gradient_check(const ModelParams& params, const GraphInputs& inputs,
                               const ObjectiveConfig& objective, double step = 1e-5);

}  // namespace mlsg
