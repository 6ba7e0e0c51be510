#pragma once

#include <cstdint>
#include <vector>

#include "mlsg/types.hpp"

namespace mlsg {

/// Random-walk corpus parameters.
struct WalkConfig {
  int gamma = 100;          // walks per head node
  int path_len = 3;         // steps per walk (a path visits path_len + 1 nodes)
  int window = 3;           // co-occurrence window along a path
  int tail_threshold = 5;   // degree cutoff g: deg <= g gets gamma * deg walks
  double neg_shift = 1.0;   // PPMI shift: subtract log(neg_shift) before clipping
  std::uint64_t seed = 0;
  /// Optional cap on walks started per node (0 = none). The degree-scaled
  /// tail count gamma * deg can exceed gamma; this bounds it when desired.
  int max_walks_per_node = 0;

  void validate() const;
};

/// Symmetric co-occurrence counts, stored sparse and sorted by (row, col).
struct FrequencyMatrix {
  int n = 0;
  std::vector<int> rows, cols;
  std::vector<std::int64_t> counts;
  std::int64_t total = 0;

  std::size_t nnz() const { return counts.size(); }
  std::int64_t at(int i, int j) const;
  Matrix to_dense() const;
  std::vector<std::int64_t> row_sums() const;
};

/// PPMI matrix P, its symmetric normalization, and audit probabilities.
struct PpmiGraph {
  SpMat p;            // max{log(p_ij / (p_i* p_*j)) - log(neg), 0}
  SpMat p_norm;       // D_P^{-1/2} P D_P^{-1/2}
  Vector degree;      // row sums of P
  SpMat prob;         // p_ij = F_ij / sum F
  Vector row_marginal, col_marginal;
};

/// Row-stochastic transition matrix (Markov chain of the walk). Rows of
/// isolated nodes fall back to a unit self-loop.
Matrix transition_matrix(const SparseGraph& graph);

/// Samples the walk corpus. Nodes with deg > tail_threshold start gamma
/// walks; nodes with 1 <= deg <= tail_threshold start gamma * deg; isolated
/// nodes start none. Walk w of node v draws from an RNG stream derived from
/// (seed, v, w), so output is identical for any thread count.
std::vector<std::vector<int>> sample_walks(const SparseGraph& graph, const WalkConfig& config,
                                           int threads = 1);

/// Counts, for every path and index pair (s, t) with 1 <= t - s <= window,
/// both (path[s], path[t]) and (path[t], path[s]).
FrequencyMatrix build_frequency(const std::vector<std::vector<int>>& paths, int window, int n,
                                int threads = 1);

PpmiGraph compute_ppmi(const FrequencyMatrix& f, double neg_shift);

/// D^{-1/2} P D^{-1/2} with D the row sums of P; zero rows stay zero and no
/// self-loop is added.
SpMat symmetric_normalize(const SpMat& p);
Matrix symmetric_normalize(const Matrix& p);

}  // namespace mlsg
