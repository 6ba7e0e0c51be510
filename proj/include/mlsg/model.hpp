#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mlsg/attention.hpp"
#include "mlsg/fused_graph.hpp"
#include "mlsg/gcn.hpp"
#include "mlsg/io.hpp"
#include "mlsg/loss.hpp"
#include "mlsg/types.hpp"

namespace mlsg {

/// Which of the three embedding channels participate (ablation switch).
struct ChannelMask {
  bool fea = true;
  bool sem = true;
  bool ori = true;

  int count() const { return (fea ? 1 : 0) + (sem ? 1 : 0) + (ori ? 1 : 0); }
  std::vector<std::string> active_names() const;
};

/// Everything trainable.
struct ModelParams {
  GcnChannel fea, sem, ori;
  GraphAttentionParams measure_att;
  ChannelAttentionParams channel_att;
  Matrix classifier_w;  // nhid2 x C
  Matrix classifier_b;  // C x 1
};

/// Order-stable visitation of every parameter tensor; grads and Adam state
/// reuse the same structure so one walk serves them all.
template <class Params, class Fn>
void for_each_param(Params& p, Fn&& fn) {
  fn("fea.w1", p.fea.w1);
  fn("fea.w2", p.fea.w2);
  fn("sem.w1", p.sem.w1);
  fn("sem.w2", p.sem.w2);
  fn("ori.w1", p.ori.w1);
  fn("ori.w2", p.ori.w2);
  fn("measure_att.w", p.measure_att.w);
  fn("measure_att.b", p.measure_att.b);
  fn("measure_att.a", p.measure_att.a);
  fn("channel_att.w", p.channel_att.w);
  fn("channel_att.b", p.channel_att.b);
  fn("channel_att.a", p.channel_att.a);
  fn("classifier.w", p.classifier_w);
  fn("classifier.b", p.classifier_b);
}

/// Bias tensors are exempt from weight decay.
bool is_bias_param(const std::string& name);

/// Fixed per-run graph structures and supervision.
struct GraphInputs {
  int n = 0;
  SpMat x;                       // features, CSR
  std::vector<SpMat> subgraphs;  // Q binary measure graphs
  std::vector<std::string> measure_names;
  FusedGraph fused;              // union pattern (built iff fea channel on)
  SpMat a_ori;                   // normalized topology
  SpMat p_norm;                  // normalized PPMI
  IntVector labels;
  int num_classes = 0;
  Splits splits;
  ChannelMask channels;
};

/// Loss-shape knobs shared by forward, backward and the gradient checker.
struct ObjectiveConfig {
  double alpha = 0.0;
  double beta = 0.0;
  double l21_epsilon = 1e-8;
  /// Removes the regularizer code path entirely (comparison harness for the
  /// alpha = beta = 0 identity).
  bool skip_regularizers = false;
};

struct ForwardResult {
  bool valid = false;
  bool training = false;
  LossTerms loss;
  Matrix predictions;  // n x C softmax rows
  Matrix z_fea, z_sem, z_ori;  // empty when the channel is off
  Matrix z_agg;
  Matrix measure_weights;  // Q x n (empty when fea off)
  Matrix channel_weights;  // n x K over active channels
  Matrix logits;           // classifier pre-softmax

  // backward state
  ChannelCache fea_cache, sem_cache, ori_cache;
  FusedGraph::State fused_state;
  std::vector<Matrix> measure_tanh;
  AggregationResult aggregation;
};

ForwardResult forward_full(const ModelParams& params, const GraphInputs& inputs,
                           const ObjectiveConfig& objective, bool training,
                           SplitMix64* dropout_rng);

/// Gradients of loss.total_smooth w.r.t. every parameter; weight_decay adds
/// the coupled decay term to weight (non-bias) tensors.
ModelParams backward_full(const ModelParams& params, const GraphInputs& inputs,
                          const ForwardResult& fwd, const ObjectiveConfig& objective,
                          double weight_decay = 0.0);

struct ModelDims {
  int n = 0, d = 0, num_classes = 0, q_count = 0;
  int nhid1 = 512, nhid2 = 128, attention_hidden = 64;
};

ModelParams init_model(const ModelDims& dims, double dropout, bool relu_output,
                       std::uint64_t seed);
ModelParams zeros_like(const ModelParams& params);

NamedMatrices params_to_tensors(const ModelParams& params);
void tensors_to_params(const NamedMatrices& tensors, ModelParams& params);

}  // namespace mlsg
