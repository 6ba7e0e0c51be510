#pragma once

#include <cstdint>
#include <vector>

#include "mlsg/types.hpp"

namespace mlsg {

/// Attention-weighted fusion of binary measure subgraphs with the +I
/// symmetric renormalization, differentiable w.r.t. the per-node measure
/// weights.
///
/// The union sparsity pattern (plus the diagonal) is fixed per run; every
/// training step only rewrites the stored values:
///   A_fea[i,j] = sum_q A^q[i,j] (w[q,i] + w[q,j]) / 2
///   Atil       = D^{-1/2} (A_fea + I) D^{-1/2},  D = diag degrees of A_fea + I.
struct FusedGraph {
  int n = 0;
  int q_count = 0;
  std::vector<int> outer;           // CSR row pointers, size n+1
  std::vector<int> inner;           // column indices, sorted per row
  std::vector<std::uint8_t> qmask;  // per slot: bit q set if A^q holds the edge

  /// Per-step values produced by forward() and consumed by backward().
  struct State {
    std::vector<double> afea;  // A_fea per slot (0 on diagonal slots)
    std::vector<double> atil;  // normalized values per slot
    Vector degree;             // of A_fea + I
    Vector inv_sqrt;
  };

  /// Union pattern of binary subgraphs (all entries must be 0/1, zero diag).
  static FusedGraph build(const std::vector<SpMat>& subgraphs);

  std::size_t slot_count() const { return inner.size(); }
  bool is_diagonal_slot(std::size_t s) const { return qmask[s] == 0; }

  State forward(const Matrix& weights) const;  // weights: Q x n, columns on simplex

  /// Read-only sparse view over (outer, inner, state.atil).
  Eigen::Map<const SpMat> matrix(const State& state) const;

  /// Chains per-slot dL/dAtil back to dL/d(weights) through the degree
  /// normalization and the symmetrized convex combination.
  Matrix backward(const State& state, const std::vector<double>& d_atil) const;
};

}  // namespace mlsg
