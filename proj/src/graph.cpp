#include "mlsg/graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace mlsg {

SpMat SparseGraph::to_sparse() const {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(entries.size());
  for (const auto& e : entries) trips.emplace_back(e.row, e.col, e.weight);
  SpMat m(n, n);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

Matrix SparseGraph::to_dense() const {
  Matrix m = Matrix::Zero(n, n);
  for (const auto& e : entries) m(e.row, e.col) += e.weight;
  return m;
}

void SparseGraph::validate() const {
  std::set<std::pair<int, int>> seen;
  for (const auto& e : entries) {
    if (e.row < 0 || e.row >= n || e.col < 0 || e.col >= n)
      throw DataError("SparseGraph: entry (" + std::to_string(e.row) + "," +
                      std::to_string(e.col) + ") out of range for n=" + std::to_string(n));
    if (e.weight < 0.0) throw DomainError("SparseGraph: negative weight");
    if (!seen.insert({e.row, e.col}).second)
      throw DataError("SparseGraph: duplicate entry (" + std::to_string(e.row) + "," +
                      std::to_string(e.col) + ")");
  }
  if (symmetric) {
    for (const auto& e : entries) {
      if (e.row != e.col && !seen.count({e.col, e.row}))
        throw DataError("SparseGraph: symmetric flag set but (" + std::to_string(e.col) + "," +
                        std::to_string(e.row) + ") missing");
    }
  }
}

SparseGraph graph_from_dense(const Matrix& a, bool symmetric) {
  SparseGraph g;
  g.n = static_cast<int>(a.rows());
  g.symmetric = symmetric;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0.0) g.entries.push_back({i, j, a(i, j)});
  return g;
}

void LabeledDataset::validate() const {
  features.validate();
  topology.validate();
  if (num_classes < 2) throw DataError("LabeledDataset: need C >= 2");
  if (labels.size() != n()) throw DimensionError("LabeledDataset: label vector length != n");
  for (int i = 0; i < labels.size(); ++i) {
    if (labels[i] != kUnlabeled && (labels[i] < 0 || labels[i] >= num_classes))
      throw DataError("LabeledDataset: label out of range at node " + std::to_string(i));
  }
  std::set<int> used;
  for (const auto* part : {&splits.train, &splits.val, &splits.test}) {
    for (int id : *part) {
      if (id < 0 || id >= n()) throw DataError("LabeledDataset: split id out of range");
      if (!used.insert(id).second) throw DataError("LabeledDataset: splits overlap at node " +
                                                   std::to_string(id));
    }
  }
  for (int id : splits.train)
    if (labels[id] == kUnlabeled) throw DataError("LabeledDataset: unlabeled train node");
}

IntVector degrees(const SparseGraph& graph) {
  IntVector deg = IntVector::Zero(graph.n);
  for (const auto& e : graph.entries)
    if (e.row != e.col && e.weight > 0.0) deg[e.row] += 1;
  return deg;
}

namespace {

Vector self_loop_degrees(const SparseGraph& graph) {
  Vector deg = Vector::Ones(graph.n);  // the +I contribution
  for (const auto& e : graph.entries) {
    if (e.weight < 0.0) throw DomainError("normalize_adjacency: negative weight");
    deg[e.row] += e.weight;
  }
  return deg;
}

}  // namespace

NormalizedGraph normalize_adjacency(const SparseGraph& graph) {
  NormalizedGraph out;
  out.n = graph.n;
  out.degrees = self_loop_degrees(graph);
  Vector inv_sqrt = out.degrees.array().rsqrt();
  out.values = Matrix::Zero(graph.n, graph.n);
  for (const auto& e : graph.entries)
    out.values(e.row, e.col) += e.weight * (inv_sqrt[e.row] * inv_sqrt[e.col]);
  for (int i = 0; i < graph.n; ++i) out.values(i, i) += inv_sqrt[i] * inv_sqrt[i];
  return out;
}

SpMat normalize_adjacency_sparse(const SparseGraph& graph) {
  Vector deg = self_loop_degrees(graph);
  Vector inv_sqrt = deg.array().rsqrt();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(graph.entries.size() + graph.n);
  for (const auto& e : graph.entries)
    trips.emplace_back(e.row, e.col, e.weight * (inv_sqrt[e.row] * inv_sqrt[e.col]));
  for (int i = 0; i < graph.n; ++i) trips.emplace_back(i, i, inv_sqrt[i] * inv_sqrt[i]);
  SpMat m(graph.n, graph.n);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

double spectral_radius(const Matrix& a, int iterations) {
  if (a.rows() == 0) return 0.0;
  Vector v = Vector::Ones(a.rows()).normalized();
  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it) {
    Vector w = a * v;
    double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
    lambda = norm;
  }
  return lambda;
}

}  // namespace mlsg
