#pragma once

#include "mlsg/rng.hpp"
#include "mlsg/types.hpp"

namespace mlsg {

/// One two-layer graph-convolution channel:
///   H = relu(M * drop(X) * W1),  Z = M * drop(H) * W2
/// with inverted dropout on each layer input during training and a linear
/// second layer by default (relu_output restores an activation on it).
struct GcnChannel {
  Matrix w1;  // d x nhid1
  Matrix w2;  // nhid1 x nhid2
  double dropout = 0.5;
  bool relu_hidden = true;
  bool relu_output = false;
};

/// Forward intermediates kept for the backward pass.
struct ChannelCache {
  bool valid = false;
  bool training = false;
  SpMat x_drop;       // X after input dropout (equals X when not training)
  Matrix xw;          // x_drop * W1
  Matrix s1;          // M * xw (pre-activation)
  Matrix h;           // activation(s1)
  Matrix h_drop_mul;  // dropout multipliers for h (empty when unused)
  Matrix h_drop;
  Matrix hw;          // h_drop * W2
  Matrix s2;          // M * hw
  Matrix z;           // activation(s2) or s2
};

struct ChannelGrads {
  Matrix w1, w2;
  /// Left factors of the propagation-matrix gradient, filled on request:
  /// dM = d_s2 * hw^T + d_s1 * xw^T evaluated at M's sparsity pattern.
  Matrix d_s1, d_s2;
};

ChannelCache gcn_channel_forward(const GcnChannel& channel, const Eigen::Ref<const SpMat>& m, const SpMat& x,
                                 bool training, SplitMix64* dropout_rng);

/// Analytic gradients for the channel. ReLU subgradient at exactly 0 is 0;
/// dropout masks are reused from the cache. `dx` (gradient w.r.t. the dense
/// input features) is only available when the cached pass had no dropout.
ChannelGrads gcn_channel_backward(const GcnChannel& channel, const Eigen::Ref<const SpMat>& m,
                                  const ChannelCache& cache, const Matrix& dz,
                                  bool need_propagation_grad = false, Matrix* dx = nullptr);

/// Uniform Glorot range +-sqrt(6 / (fan_in + fan_out)).
void glorot_fill(Matrix& w, SplitMix64& rng);

/// Converts a dense matrix to the CSR feature layout (zeros dropped).
SpMat to_sparse_features(const Matrix& x);

}  // namespace mlsg
