#include "mlsg/model.hpp"

#include <cmath>

namespace mlsg {

std::vector<std::string> ChannelMask::active_names() const {
  std::vector<std::string> names;
  if (fea) names.push_back("fea");
  if (sem) names.push_back("sem");
  if (ori) names.push_back("ori");
  return names;
}

bool is_bias_param(const std::string& name) {
  return name.size() >= 2 && name.compare(name.size() - 2, 2, ".b") == 0;
}

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::vector<const Matrix*> active_embeddings(const ChannelMask& mask, const ForwardResult& r) {
  std::vector<const Matrix*> zs;
  if (mask.fea) zs.push_back(&r.z_fea);
  if (mask.sem) zs.push_back(&r.z_sem);
  if (mask.ori) zs.push_back(&r.z_ori);
  return zs;
}

}  // namespace

ForwardResult forward_full(const ModelParams& params, const GraphInputs& inputs,
                           const ObjectiveConfig& objective, bool training,
                           SplitMix64* dropout_rng) {
  if (inputs.channels.count() < 1) throw DomainError("forward_full: no active channels");
  if (inputs.splits.train.empty()) throw DataError("forward_full: empty train split");

  ForwardResult r;
  r.valid = true;
  r.training = training;

  if (inputs.channels.fea) {
    Matrix logits = measure_attention_logits(params.measure_att, inputs.subgraphs, &r.measure_tanh);
    r.measure_weights = softmax_rows(logits.transpose()).transpose();
    r.fused_state = inputs.fused.forward(r.measure_weights);
    r.fea_cache =
        gcn_channel_forward(params.fea, inputs.fused.matrix(r.fused_state), inputs.x, training,
                            dropout_rng);
    r.z_fea = r.fea_cache.z;
  }
  if (inputs.channels.sem) {
    r.sem_cache = gcn_channel_forward(params.sem, inputs.p_norm, inputs.x, training, dropout_rng);
    r.z_sem = r.sem_cache.z;
  }
  if (inputs.channels.ori) {
    r.ori_cache = gcn_channel_forward(params.ori, inputs.a_ori, inputs.x, training, dropout_rng);
    r.z_ori = r.ori_cache.z;
  }

  r.aggregation = aggregate_embeddings(active_embeddings(inputs.channels, r), params.channel_att);
  r.z_agg = r.aggregation.z_agg;
  r.channel_weights = r.aggregation.weights;

  r.logits = r.z_agg * params.classifier_w;
  r.logits.rowwise() += params.classifier_b.col(0).transpose();
  r.predictions = softmax_rows(r.logits);

  r.loss.l0 = cross_entropy(r.predictions, inputs.labels, inputs.splits.train);
  if (!objective.skip_regularizers) {
    if (inputs.channels.fea && inputs.channels.ori) {
      r.loss.reg_a = l21_distance(r.z_fea, r.z_ori, 0.0);
      r.loss.reg_a_smooth = l21_distance(r.z_fea, r.z_ori, objective.l21_epsilon);
    }
    if (inputs.channels.sem && inputs.channels.ori) {
      r.loss.reg_b = l21_distance(r.z_sem, r.z_ori, 0.0);
      r.loss.reg_b_smooth = l21_distance(r.z_sem, r.z_ori, objective.l21_epsilon);
    }
  }
  r.loss.total = r.loss.l0 + objective.alpha * r.loss.reg_a + objective.beta * r.loss.reg_b;
  r.loss.total_smooth =
      r.loss.l0 + objective.alpha * r.loss.reg_a_smooth + objective.beta * r.loss.reg_b_smooth;
  return r;
}

ModelParams backward_full(const ModelParams& params, const GraphInputs& inputs,
                          const ForwardResult& fwd, const ObjectiveConfig& objective,
                          double weight_decay) {
  if (!fwd.valid) throw StateError("backward_full: no forward cache");
  if (!fwd.training) throw StateError("backward_full: cache is from an evaluation pass");

  ModelParams g = zeros_like(params);

  // Classifier head.
  Matrix d_logits =
      cross_entropy_softmax_backward(fwd.predictions, inputs.labels, inputs.splits.train);
  g.classifier_w = fwd.z_agg.transpose() * d_logits;
  g.classifier_b = d_logits.colwise().sum().transpose();
  Matrix d_zagg = d_logits * params.classifier_w.transpose();

  // Aggregation attention.
  auto zs = active_embeddings(inputs.channels, fwd);
  ChannelAttentionGrads agg =
      aggregate_embeddings_backward(params.channel_att, zs, fwd.aggregation, d_zagg);
  g.channel_att.w = std::move(agg.w);
  g.channel_att.b = std::move(agg.b);
  g.channel_att.a = std::move(agg.a);

  int slot = 0;
  Matrix d_zfea, d_zsem, d_zori;
  if (inputs.channels.fea) d_zfea = std::move(agg.d_embeddings[slot++]);
  if (inputs.channels.sem) d_zsem = std::move(agg.d_embeddings[slot++]);
  if (inputs.channels.ori) d_zori = std::move(agg.d_embeddings[slot++]);

  // l2,1 alignment terms (smoothed gradient).
  if (!objective.skip_regularizers) {
    if (objective.alpha != 0.0 && inputs.channels.fea && inputs.channels.ori) {
      Matrix d = l21_distance_backward(fwd.z_fea, fwd.z_ori, objective.l21_epsilon);
      d_zfea += objective.alpha * d;
      d_zori -= objective.alpha * d;
    }
    if (objective.beta != 0.0 && inputs.channels.sem && inputs.channels.ori) {
      Matrix d = l21_distance_backward(fwd.z_sem, fwd.z_ori, objective.l21_epsilon);
      d_zsem += objective.beta * d;
      d_zori -= objective.beta * d;
    }
  }

  if (inputs.channels.sem) {
    ChannelGrads cg = gcn_channel_backward(params.sem, inputs.p_norm, fwd.sem_cache, d_zsem);
    g.sem.w1 = std::move(cg.w1);
    g.sem.w2 = std::move(cg.w2);
  }
  if (inputs.channels.ori) {
    ChannelGrads cg = gcn_channel_backward(params.ori, inputs.a_ori, fwd.ori_cache, d_zori);
    g.ori.w1 = std::move(cg.w1);
    g.ori.w2 = std::move(cg.w2);
  }
  if (inputs.channels.fea) {
    const FusedGraph& fused = inputs.fused;
    ChannelGrads cg = gcn_channel_backward(params.fea, fused.matrix(fwd.fused_state),
                                           fwd.fea_cache, d_zfea, /*need_propagation_grad=*/true);
    g.fea.w1 = std::move(cg.w1);
    g.fea.w2 = std::move(cg.w2);

    // dL/dAtil at the stored pattern: dAtil = d_s2 hw^T + d_s1 xw^T.
    RowMajor d_s1 = cg.d_s1, d_s2 = cg.d_s2;
    RowMajor xw = fwd.fea_cache.xw, hw = fwd.fea_cache.hw;
    std::vector<double> d_atil(fused.slot_count());
    for (int i = 0; i < fused.n; ++i)
      for (int s = fused.outer[i]; s < fused.outer[i + 1]; ++s) {
        const int j = fused.inner[s];
        d_atil[s] = d_s2.row(i).dot(hw.row(j)) + d_s1.row(i).dot(xw.row(j));
      }
    Matrix d_measure_weights = fused.backward(fwd.fused_state, d_atil);

    // Softmax over measures runs per node, i.e. per column of the Q x n map.
    Matrix d_measure_logits =
        softmax_rows_backward(fwd.measure_weights.transpose(), d_measure_weights.transpose())
            .transpose();
    GraphAttentionGrads ma = measure_attention_backward(params.measure_att, inputs.subgraphs,
                                                        fwd.measure_tanh, d_measure_logits);
    g.measure_att.w = std::move(ma.w);
    g.measure_att.b = std::move(ma.b);
    g.measure_att.a = std::move(ma.a);
  }

  if (weight_decay != 0.0) {
    std::vector<std::string> names;
    std::vector<Matrix*> grads;
    std::vector<const Matrix*> values;
    for_each_param(g, [&](const std::string& n, Matrix& m) {
      names.push_back(n);
      grads.push_back(&m);
    });
    for_each_param(const_cast<ModelParams&>(params),
                   [&](const std::string&, Matrix& m) { values.push_back(&m); });
    for (std::size_t k = 0; k < grads.size(); ++k)
      if (!is_bias_param(names[k])) *grads[k] += weight_decay * *values[k];
  }
  return g;
}

ModelParams init_model(const ModelDims& dims, double dropout, bool relu_output,
                       std::uint64_t seed) {
  if (dims.n < 1 || dims.d < 1 || dims.num_classes < 2 || dims.q_count < 1)
    throw DimensionError("init_model: bad dimensions");
  if (dims.nhid1 < 1 || dims.nhid2 < 1 || dims.attention_hidden < 1)
    throw DimensionError("init_model: hidden sizes must be positive");
  if (dropout < 0.0 || dropout >= 1.0) throw DomainError("init_model: dropout must be in [0,1)");

  ModelParams p;
  for (GcnChannel* ch : {&p.fea, &p.sem, &p.ori}) {
    ch->w1.resize(dims.d, dims.nhid1);
    ch->w2.resize(dims.nhid1, dims.nhid2);
    ch->dropout = dropout;
    ch->relu_output = relu_output;
  }
  const int h = dims.attention_hidden;
  p.measure_att.w.resize(h, dims.n);
  p.measure_att.b.resize(h, dims.n);
  p.measure_att.a.resize(h, 1);
  p.channel_att.w.resize(h, dims.nhid2);
  p.channel_att.b.resize(h, 1);
  p.channel_att.a.resize(h, 1);
  p.classifier_w.resize(dims.nhid2, dims.num_classes);
  p.classifier_b.resize(dims.num_classes, 1);

  SplitMix64 rng = SplitMix64::stream(seed, 0x696e6974, 0);
  for_each_param(p, [&](const std::string& name, Matrix& w) {
    if (is_bias_param(name)) w.setZero();
    else glorot_fill(w, rng);
  });
  return p;
}

ModelParams zeros_like(const ModelParams& params) {
  ModelParams z = params;
  for_each_param(z, [](const std::string&, Matrix& w) { w.setZero(); });
  return z;
}

NamedMatrices params_to_tensors(const ModelParams& params) {
  NamedMatrices out;
  for_each_param(const_cast<ModelParams&>(params),
                 [&](const std::string& name, Matrix& w) { out.emplace_back(name, w); });
  return out;
}

void tensors_to_params(const NamedMatrices& tensors, ModelParams& params) {
  for_each_param(params, [&](const std::string& name, Matrix& w) {
    for (const auto& [tname, tvalue] : tensors) {
      if (tname == name) {
        if (tvalue.rows() != w.rows() || tvalue.cols() != w.cols())
          throw DimensionError("checkpoint tensor '" + name + "' has shape " +
                               std::to_string(tvalue.rows()) + "x" + std::to_string(tvalue.cols()) +
                               ", expected " + std::to_string(w.rows()) + "x" +
                               std::to_string(w.cols()));
        w = tvalue;
        return;
      }
    }
    throw DataError("checkpoint is missing tensor '" + name + "'");
  });
}

}  // namespace mlsg
