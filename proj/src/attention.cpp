#include "mlsg/attention.hpp"

#include <algorithm>
#include <cmath>

namespace mlsg {

Matrix softmax_rows(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double m = logits.row(i).maxCoeff();
    Eigen::RowVectorXd e = (logits.row(i).array() - m).exp();
    out.row(i) = e / e.sum();
  }
  return out;
}

Matrix softmax_rows_backward(const Matrix& weights, const Matrix& d_weights) {
  Matrix d_logits(weights.rows(), weights.cols());
  for (Eigen::Index i = 0; i < weights.rows(); ++i) {
    const double dot = weights.row(i).dot(d_weights.row(i));
    d_logits.row(i) = (weights.row(i).array() * (d_weights.row(i).array() - dot)).matrix();
  }
  return d_logits;
}

Matrix measure_attention_logits(const GraphAttentionParams& params,
                                const std::vector<SpMat>& subgraphs,
                                std::vector<Matrix>* tanh_cache) {
  const int q_count = static_cast<int>(subgraphs.size());
  if (q_count < 1) throw DimensionError("measure_attention_logits: no subgraphs");
  const Eigen::Index n = subgraphs[0].rows();
  if (params.w.cols() != n || params.b.rows() != params.w.rows() || params.b.cols() != n ||
      params.a.rows() != params.w.rows())
    throw DimensionError("measure_attention_logits: parameter shapes do not match n/h");

  Matrix logits(q_count, n);
  if (tanh_cache) tanh_cache->assign(q_count, Matrix());
  for (int q = 0; q < q_count; ++q) {
    if (subgraphs[q].rows() != n || subgraphs[q].cols() != n)
      throw DimensionError("measure_attention_logits: subgraph size mismatch");
    // W (A^q)^T + b, columns indexed by node.
    SpMat at = subgraphs[q].transpose();
    Matrix u = params.w * at;
    u += params.b;
    Matrix t = u.array().tanh().matrix();
    logits.row(q) = params.a.col(0).transpose() * t;
    if (tanh_cache) (*tanh_cache)[q] = std::move(t);
  }
  return logits;
}

GraphAttentionGrads measure_attention_backward(const GraphAttentionParams& params,
                                               const std::vector<SpMat>& subgraphs,
                                               const std::vector<Matrix>& tanh_cache,
                                               const Matrix& d_logits) {
  const int q_count = static_cast<int>(subgraphs.size());
  GraphAttentionGrads g;
  g.w = Matrix::Zero(params.w.rows(), params.w.cols());
  g.b = Matrix::Zero(params.b.rows(), params.b.cols());
  g.a = Matrix::Zero(params.a.rows(), params.a.cols());
  for (int q = 0; q < q_count; ++q) {
    const Matrix& t = tanh_cache[q];
    g.a.col(0) += t * d_logits.row(q).transpose();
    // dU = (a * d_omega) .* (1 - t^2)
    Matrix du = (params.a.col(0) * d_logits.row(q))
                    .cwiseProduct((1.0 - t.array().square()).matrix());
    g.w += du * subgraphs[q];  // ((A^q)^T)^T = A^q
    g.b += du;
  }
  return g;
}

FusionResult fuse_measure_graphs(const std::vector<Matrix>& subgraphs,
                                 const GraphAttentionParams& params) {
  const int q_count = static_cast<int>(subgraphs.size());
  if (q_count < 1) throw DimensionError("fuse_measure_graphs: need Q >= 1");
  const Eigen::Index n = subgraphs[0].rows();
  std::vector<SpMat> sparse;
  sparse.reserve(q_count);
  for (const auto& a : subgraphs) {
    if (a.rows() != n || a.cols() != n)
      throw DimensionError("fuse_measure_graphs: subgraph size mismatch");
    sparse.emplace_back(a.sparseView());
  }
  Matrix logits = measure_attention_logits(params, sparse);
  FusionResult out;
  out.weights = softmax_rows(logits.transpose()).transpose();  // softmax over q per node
  Matrix raw = Matrix::Zero(n, n);
  for (int q = 0; q < q_count; ++q) {
    Vector wq = out.weights.row(q).transpose();
    raw += wq.asDiagonal() * subgraphs[q];
  }
  out.fused = 0.5 * (raw + raw.transpose());
  return out;
}

AggregationResult aggregate_embeddings(const std::vector<const Matrix*>& embeddings,
                                       const ChannelAttentionParams& params) {
  const int k = static_cast<int>(embeddings.size());
  if (k < 1) throw DimensionError("aggregate_embeddings: no channels");
  const Eigen::Index n = embeddings[0]->rows();
  const Eigen::Index m = embeddings[0]->cols();
  for (const Matrix* z : embeddings)
    if (z->rows() != n || z->cols() != m)
      throw DimensionError("aggregate_embeddings: embedding shape mismatch");
  if (params.w.cols() != m || params.b.rows() != params.w.rows() ||
      params.a.rows() != params.w.rows())
    throw DimensionError("aggregate_embeddings: parameter shapes do not match");

  AggregationResult out;
  Matrix logits(n, k);
  out.tanh_cache.resize(k);
  for (int c = 0; c < k; ++c) {
    Matrix u = params.w * embeddings[c]->transpose();  // h x n
    u.colwise() += params.b.col(0);
    Matrix t = u.array().tanh().matrix();
    logits.col(c) = (params.a.col(0).transpose() * t).transpose();
    out.tanh_cache[c] = std::move(t);
  }
  out.weights = softmax_rows(logits);
  out.z_agg = Matrix::Zero(n, m);
  for (int c = 0; c < k; ++c) out.z_agg += out.weights.col(c).asDiagonal() * (*embeddings[c]);
  return out;
}

ChannelAttentionGrads aggregate_embeddings_backward(const ChannelAttentionParams& params,
                                                    const std::vector<const Matrix*>& embeddings,
                                                    const AggregationResult& cache,
                                                    const Matrix& d_z_agg) {
  const int k = static_cast<int>(embeddings.size());
  const Eigen::Index n = d_z_agg.rows();

  ChannelAttentionGrads g;
  g.w = Matrix::Zero(params.w.rows(), params.w.cols());
  g.b = Matrix::Zero(params.b.rows(), params.b.cols());
  g.a = Matrix::Zero(params.a.rows(), params.a.cols());
  g.d_embeddings.assign(k, Matrix());

  // dL/d(weight_{i,c}) = dZagg_i . z_{c,i}
  Matrix d_weights(n, k);
  for (int c = 0; c < k; ++c)
    d_weights.col(c) = d_z_agg.cwiseProduct(*embeddings[c]).rowwise().sum();
  Matrix d_logits = softmax_rows_backward(cache.weights, d_weights);

  for (int c = 0; c < k; ++c) {
    const Matrix& t = cache.tanh_cache[c];
    g.a.col(0) += t * d_logits.col(c);
    Matrix du = (params.a.col(0) * d_logits.col(c).transpose())
                    .cwiseProduct((1.0 - t.array().square()).matrix());
    g.w += du * (*embeddings[c]);
    g.b.col(0) += du.rowwise().sum();
    g.d_embeddings[c] = cache.weights.col(c).asDiagonal() * d_z_agg + du.transpose() * params.w;
  }
  return g;
}

namespace {

double quantile_type7(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return 0.0;
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

std::vector<ColumnSummary> attention_statistics(const Matrix& weights,
                                                const std::vector<std::string>& names) {
  if (weights.rows() < 1) throw DimensionError("attention_statistics: empty weight matrix");
  if (names.size() != static_cast<std::size_t>(weights.cols()))
    throw DimensionError("attention_statistics: one name per column required");
  for (Eigen::Index i = 0; i < weights.rows(); ++i) {
    const double sum = weights.row(i).sum();
    if (std::abs(sum - 1.0) > 1e-6 || weights.row(i).minCoeff() < -1e-9)
      throw IntegrityError("attention_statistics: row " + std::to_string(i) +
                           " is off the simplex (sum=" + std::to_string(sum) + ")");
  }
  std::vector<ColumnSummary> out;
  for (Eigen::Index c = 0; c < weights.cols(); ++c) {
    std::vector<double> col(weights.rows());
    for (Eigen::Index i = 0; i < weights.rows(); ++i) col[i] = weights(i, c);
    std::sort(col.begin(), col.end());
    ColumnSummary s;
    s.name = names[c];
    s.min = col.front();
    s.q1 = quantile_type7(col, 0.25);
    s.median = quantile_type7(col, 0.5);
    s.q3 = quantile_type7(col, 0.75);
    s.max = col.back();
    s.mean = weights.col(c).mean();
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace mlsg
