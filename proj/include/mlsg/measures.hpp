#pragma once

#include <string>
#include <vector>

#include "mlsg/types.hpp"

namespace mlsg {

/// Pairwise similarity functions used to build feature subgraphs.
struct MeasureKind {
  enum Tag { Cosine, Gaussian, Sparsity } tag = Cosine;
  /// Gaussian bandwidth; <= 0 selects the mean pairwise squared distance.
  double t = 0.0;
  /// Sparsity neighbor count; <= 0 inherits the kNN cut.
  int k_s = 0;

  std::string name() const;
  static MeasureKind parse(const std::string& name);
};

/// Similarity + its kNN-masked binary adjacency for one measure.
struct MeasureSubgraph {
  Matrix similarity;     // S^q, n x n
  SparseGraph adjacency; // A^q, binary symmetric, zero diagonal
  int k = 0;
  MeasureKind measure;
};

/// Mean over i != j of ||x_i - x_j||^2 (the parameter-free Gaussian bandwidth).
double mean_pairwise_squared_distance(const Matrix& x);

/// Cosine: x_i.x_j / (|x_i||x_j|), in [-1, 1].
/// Gaussian: exp(-||x_i - x_j||^2 / t), in (0, 1].
/// Sparsity: per row, weights over the k_s nearest neighbors by squared
/// distance (ties by lower index) with the closed form
///   (e_{i,k+1} - e_{ij}) / (k * e_{i,k+1} - sum_{j'=1..k} e_{ij'}),
/// giving exactly k_s positive entries summing to 1; asymmetric in general.
Matrix similarity_matrix(const FeatureMatrix& x, const MeasureKind& measure);

/// Keeps, per row, the k largest off-diagonal similarities (ties by lower
/// column index) and OR-symmetrizes the picks into a binary graph.
SparseGraph knn_sparsify(const Matrix& s, int k);

std::vector<MeasureSubgraph> build_measure_subgraphs(const FeatureMatrix& x,
                                                     const std::vector<MeasureKind>& measures,
                                                     int k);

}  // namespace mlsg
