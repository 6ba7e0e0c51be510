#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <string>
#include <vector>

#include "mlsg/errors.hpp"

namespace mlsg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntVector = Eigen::VectorXi;
using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

constexpr int kUnlabeled = -1;

/// Node feature matrix X (n x d), dense storage.
struct FeatureMatrix {
  Matrix values;

  FeatureMatrix() = default;
  explicit FeatureMatrix(Matrix v) : values(std::move(v)) { validate(); }

  int n() const { return static_cast<int>(values.rows()); }
  int d() const { return static_cast<int>(values.cols()); }

  void validate() const {
    if (values.rows() < 1 || values.cols() < 1)
      throw DimensionError("FeatureMatrix: need n >= 1 and d >= 1");
    if (!values.allFinite()) throw NumericError("FeatureMatrix: non-finite entry");
  }
};

/// One weighted edge of a SparseGraph.
struct GraphEntry {
  int row = 0;
  int col = 0;
  double weight = 0.0;
};

/// Symmetric nonnegative adjacency over n nodes stored as a coordinate list.
/// When `symmetric` is set, both (i,j,w) and (j,i,w) are stored explicitly.
struct SparseGraph {
  int n = 0;
  std::vector<GraphEntry> entries;
  bool symmetric = true;

  SparseGraph() = default;
  SparseGraph(int n_, std::vector<GraphEntry> e, bool sym = true)
      : n(n_), entries(std::move(e)), symmetric(sym) {}

  std::size_t entry_count() const { return entries.size(); }

  /// Number of stored undirected edges (pairs counted once, assumes symmetric).
  std::size_t undirected_edge_count() const {
    std::size_t self = 0, off = 0;
    for (const auto& e : entries) (e.row == e.col ? self : off)++;
    return self + off / 2;
  }

  SpMat to_sparse() const;
  Matrix to_dense() const;

  /// Checks bounds, nonnegativity, duplicates, and symmetric closure.
  void validate() const;
};

/// Builds a SparseGraph from an Eigen sparse or dense matrix (drops zeros).
SparseGraph graph_from_dense(const Matrix& a, bool symmetric = true);

/// D^{-1/2} (A + I) D^{-1/2} with D the degree matrix of A + I.
struct NormalizedGraph {
  int n = 0;
  Matrix values;   // n x n, symmetric
  Vector degrees;  // degree vector of A + I
};

/// Disjoint train/val/test node-id sets.
struct Splits {
  std::vector<int> train, val, test;
};

/// Features + topology + labels (+ optional splits).
struct LabeledDataset {
  std::string name = "dataset";
  FeatureMatrix features;
  SparseGraph topology;
  IntVector labels;  // per-node class id in [0, C) or kUnlabeled
  int num_classes = 0;
  Splits splits;

  int n() const { return features.n(); }
  int d() const { return features.d(); }

  void validate() const;
};

}  // namespace mlsg
