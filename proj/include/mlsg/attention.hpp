#pragma once

#include <string>
#include <vector>

#include "mlsg/types.hpp"

namespace mlsg {

/// Perception layer + shared attention vector scoring candidate graphs:
/// per measure q, omega_q = a^T tanh(W (A^q)^T + b), an n-vector of logits.
struct GraphAttentionParams {
  Matrix w;  // h x n
  Matrix b;  // h x n
  Matrix a;  // h x 1
};

/// Same mechanism applied to embedding rows: per node i and channel c,
/// omega_{i,c} = a^T tanh(W z_{c,i} + b).
struct ChannelAttentionParams {
  Matrix w;  // h x nhid2
  Matrix b;  // h x 1
  Matrix a;  // h x 1
};

/// Numerically shifted row softmax.
Matrix softmax_rows(const Matrix& logits);

/// d(logits) for y = softmax_rows(logits) given dL/dy.
Matrix softmax_rows_backward(const Matrix& weights, const Matrix& d_weights);

// ---- measure fusion --------------------------------------------------------

/// Per-measure logits (Q x n). `tanh_cache`, when given, receives the Q
/// tanh activations (h x n each) needed by the backward pass.
Matrix measure_attention_logits(const GraphAttentionParams& params,
                                const std::vector<SpMat>& subgraphs,
                                std::vector<Matrix>* tanh_cache = nullptr);

struct GraphAttentionGrads {
  Matrix w, b, a;
};

GraphAttentionGrads measure_attention_backward(const GraphAttentionParams& params,
                                               const std::vector<SpMat>& subgraphs,
                                               const std::vector<Matrix>& tanh_cache,
                                               const Matrix& d_logits);

struct FusionResult {
  Matrix fused;    // n x n, symmetrized
  Matrix weights;  // Q x n, columns on the simplex
};

/// Attention-weighted convex fusion of candidate subgraphs followed by
/// (A + A^T)/2 symmetrization. Dense contract-level variant; the training
/// path uses FusedGraph over the sparse union pattern.
FusionResult fuse_measure_graphs(const std::vector<Matrix>& subgraphs,
                                 const GraphAttentionParams& params);

// ---- channel aggregation ---------------------------------------------------

struct AggregationResult {
  Matrix z_agg;                    // n x m
  Matrix weights;                  // n x K, rows on the simplex
  std::vector<Matrix> tanh_cache;  // per channel: h x n
};

AggregationResult aggregate_embeddings(const std::vector<const Matrix*>& embeddings,
                                       const ChannelAttentionParams& params);

struct ChannelAttentionGrads {
  Matrix w, b, a;
  std::vector<Matrix> d_embeddings;  // per channel: n x m
};

ChannelAttentionGrads aggregate_embeddings_backward(const ChannelAttentionParams& params,
                                                    const std::vector<const Matrix*>& embeddings,
                                                    const AggregationResult& cache,
                                                    const Matrix& d_z_agg);

// ---- attention statistics --------------------------------------------------

struct ColumnSummary {
  std::string name;
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0, mean = 0;
};

/// Five-number summary + mean per column of an n x K simplex matrix.
/// Throws IntegrityError when a row departs the simplex by more than 1e-6.
std::vector<ColumnSummary> attention_statistics(const Matrix& weights,
                                                const std::vector<std::string>& names);

}  // namespace mlsg
