#include "mlsg/gcn.hpp"

#include <cmath>
#include <string>

namespace mlsg {

namespace {

void check_finite(const Matrix& m, const char* layer) {
  if (!m.allFinite())
    throw NumericError(std::string("gcn_channel_forward: non-finite value in ") + layer);
}

Matrix relu(const Matrix& m) { return m.cwiseMax(0.0); }

/// Derivative mask with the subgradient at 0 defined as 0.
Matrix relu_mask(const Matrix& pre) {
  return (pre.array() > 0.0).cast<double>().matrix();
}

SpMat dropout_sparse(const SpMat& x, double rate, SplitMix64& rng) {
  const double keep = 1.0 - rate;
  SpMat out = x;
  for (int i = 0; i < out.outerSize(); ++i)
    for (SpMat::InnerIterator it(out, i); it; ++it)
      it.valueRef() = rng.next_double() < keep ? it.value() / keep : 0.0;
  return out;
}

Matrix dropout_multipliers(Eigen::Index rows, Eigen::Index cols, double rate, SplitMix64& rng) {
  const double keep = 1.0 - rate;
  Matrix mul(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      mul(i, j) = rng.next_double() < keep ? 1.0 / keep : 0.0;
  return mul;
}

}  // namespace

ChannelCache gcn_channel_forward(const GcnChannel& channel, const Eigen::Ref<const SpMat>& m, const SpMat& x,
                                 bool training, SplitMix64* dropout_rng) {
  if (m.rows() != m.cols() || m.rows() != x.rows())
    throw DimensionError("gcn_channel_forward: propagation matrix / feature shape mismatch");
  if (x.cols() != channel.w1.rows())
    throw DimensionError("gcn_channel_forward: X cols " + std::to_string(x.cols()) +
                         " != W1 rows " + std::to_string(channel.w1.rows()));
  if (channel.w1.cols() != channel.w2.rows())
    throw DimensionError("gcn_channel_forward: W1 cols != W2 rows");

  const bool drop = training && channel.dropout > 0.0;
  if (drop && !dropout_rng)
    throw StateError("gcn_channel_forward: training with dropout requires an RNG");

  ChannelCache c;
  c.valid = true;
  c.training = training;
  c.x_drop = drop ? dropout_sparse(x, channel.dropout, *dropout_rng) : x;
  c.xw = c.x_drop * channel.w1;
  c.s1 = m * c.xw;
  check_finite(c.s1, "layer 1");
  c.h = channel.relu_hidden ? relu(c.s1) : c.s1;
  if (drop) {
    c.h_drop_mul = dropout_multipliers(c.h.rows(), c.h.cols(), channel.dropout, *dropout_rng);
    c.h_drop = c.h.cwiseProduct(c.h_drop_mul);
  } else {
    c.h_drop = c.h;
  }
  c.hw = c.h_drop * channel.w2;
  c.s2 = m * c.hw;
  check_finite(c.s2, "layer 2");
  c.z = channel.relu_output ? relu(c.s2) : c.s2;
  return c;
}

ChannelGrads gcn_channel_backward(const GcnChannel& channel, const Eigen::Ref<const SpMat>& m,
                                  const ChannelCache& cache, const Matrix& dz,
                                  bool need_propagation_grad, Matrix* dx) {
  if (!cache.valid) throw StateError("gcn_channel_backward: no forward cache");
  if (dz.rows() != cache.z.rows() || dz.cols() != cache.z.cols())
    throw DimensionError("gcn_channel_backward: upstream gradient shape mismatch");

  const bool dropped = cache.training && channel.dropout > 0.0;

  ChannelGrads g;
  Matrix d_s2 = channel.relu_output ? dz.cwiseProduct(relu_mask(cache.s2)).eval() : dz;
  Matrix d_hw = m.transpose() * d_s2;
  g.w2 = cache.h_drop.transpose() * d_hw;
  Matrix d_h = d_hw * channel.w2.transpose();
  if (dropped) d_h = d_h.cwiseProduct(cache.h_drop_mul);
  Matrix d_s1 = channel.relu_hidden ? d_h.cwiseProduct(relu_mask(cache.s1)).eval() : d_h;
  Matrix d_xw = m.transpose() * d_s1;
  g.w1 = cache.x_drop.transpose() * d_xw;
  if (need_propagation_grad) {
    g.d_s1 = std::move(d_s1);
    g.d_s2 = std::move(d_s2);
  }
  if (dx) {
    if (dropped)
      throw StateError("gcn_channel_backward: input gradient unavailable under dropout");
    *dx = d_xw * channel.w1.transpose();
  }
  return g;
}

void glorot_fill(Matrix& w, SplitMix64& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
  for (Eigen::Index i = 0; i < w.rows(); ++i)
    for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = rng.next_uniform(-bound, bound);
}

SpMat to_sparse_features(const Matrix& x) {
  std::vector<Eigen::Triplet<double>> trips;
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      if (x(i, j) != 0.0) trips.emplace_back(static_cast<int>(i), static_cast<int>(j), x(i, j));
  SpMat s(x.rows(), x.cols());
  s.setFromTriplets(trips.begin(), trips.end());
  return s;
}

}  // namespace mlsg
