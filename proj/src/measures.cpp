#include "mlsg/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace mlsg {

std::string MeasureKind::name() const {
  switch (tag) {
    case Cosine: return "cosine";
    case Gaussian: return "gaussian";
    case Sparsity: return "sparsity";
  }
  return "?";
}

MeasureKind MeasureKind::parse(const std::string& name) {
  MeasureKind m;
  if (name == "cosine") m.tag = Cosine;
  else if (name == "gaussian") m.tag = Gaussian;
  else if (name == "sparsity") m.tag = Sparsity;
  else throw ConfigError("unknown measure '" + name + "'");
  return m;
}

double mean_pairwise_squared_distance(const Matrix& x) {
  const Eigen::Index n = x.rows();
  if (n < 2) return 0.0;
  // sum_{i,j} ||xi-xj||^2 = 2n * sum_i ||xi||^2 - 2 ||sum_i xi||^2
  const double sq = x.rowwise().squaredNorm().sum();
  const double total = 2.0 * static_cast<double>(n) * sq - 2.0 * x.colwise().sum().squaredNorm();
  return std::max(total, 0.0) / (static_cast<double>(n) * (n - 1));
}

namespace {

Matrix squared_distances(const Matrix& x) {
  Vector sq = x.rowwise().squaredNorm();
  Matrix d = (-2.0 * (x * x.transpose())).eval();
  d.colwise() += sq;
  d.rowwise() += sq.transpose();
  d = d.cwiseMax(0.0);
  d.diagonal().setZero();  // kill gemm roundoff; ||x_i - x_i||^2 is 0
  return d;
}

Matrix cosine_similarity(const Matrix& x) {
  Vector norms = x.rowwise().norm();
  for (Eigen::Index i = 0; i < norms.size(); ++i)
    if (norms[i] == 0.0)
      throw DomainError("cosine similarity: zero-norm feature row at node " + std::to_string(i));
  Matrix s = x * x.transpose();
  s.array().colwise() /= norms.array();
  s.array().rowwise() /= norms.transpose().array();
  return s.cwiseMin(1.0).cwiseMax(-1.0);
}

Matrix sparsity_similarity(const Matrix& x, int k_s) {
  const int n = static_cast<int>(x.rows());
  if (k_s < 1 || k_s >= n)
    throw DomainError("sparsity measure: need 1 <= k_s < n, got k_s=" + std::to_string(k_s));
  Matrix e = squared_distances(x);
  Matrix s = Matrix::Zero(n, n);
  std::vector<int> order(n - 1);
  for (int i = 0; i < n; ++i) {
    int m = 0;
    for (int j = 0; j < n; ++j)
      if (j != i) order[m++] = j;
    // Ascending distance, ties by lower column index.
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (e(i, a) != e(i, b)) return e(i, a) < e(i, b);
      return a < b;
    });
    const double e_next = e(i, order[k_s]);  // the (k_s+1)-th nearest
    double denom = k_s * e_next;
    for (int r = 0; r < k_s; ++r) denom -= e(i, order[r]);
    if (denom > 0.0) {
      for (int r = 0; r < k_s; ++r) s(i, order[r]) = (e_next - e(i, order[r])) / denom;
    } else {
      // All k_s+1 nearest distances coincide; fall back to uniform weights.
      for (int r = 0; r < k_s; ++r) s(i, order[r]) = 1.0 / k_s;
    }
  }
  return s;
}

}  // namespace

Matrix similarity_matrix(const FeatureMatrix& x, const MeasureKind& measure) {
  switch (measure.tag) {
    case MeasureKind::Cosine:
      return cosine_similarity(x.values);
    case MeasureKind::Gaussian: {
      double t = measure.t > 0.0 ? measure.t : mean_pairwise_squared_distance(x.values);
      if (t <= 0.0) t = 1.0;  // all rows identical; any bandwidth gives S = 1
      return ((squared_distances(x.values) / -t).array().exp()).matrix();
    }
    case MeasureKind::Sparsity:
      return sparsity_similarity(x.values, measure.k_s > 0 ? measure.k_s : 1);
  }
  throw DomainError("similarity_matrix: bad measure tag");
}

SparseGraph knn_sparsify(const Matrix& s, int k) {
  const int n = static_cast<int>(s.rows());
  if (s.rows() != s.cols()) throw DimensionError("knn_sparsify: matrix not square");
  if (k < 1 || k >= n) throw DomainError("knn_sparsify: need 1 <= k < n, got k=" + std::to_string(k));
  if (!s.allFinite()) throw NumericError("knn_sparsify: non-finite similarity");

  std::set<std::pair<int, int>> picked;
  std::vector<int> order(n - 1);
  for (int i = 0; i < n; ++i) {
    int m = 0;
    for (int j = 0; j < n; ++j)
      if (j != i) order[m++] = j;
    // Descending similarity, ties by lower column index.
    std::nth_element(order.begin(), order.begin() + (k - 1), order.end(), [&](int a, int b) {
      if (s(i, a) != s(i, b)) return s(i, a) > s(i, b);
      return a < b;
    });
    for (int r = 0; r < k; ++r) {
      int j = order[r];
      picked.insert({std::min(i, j), std::max(i, j)});
    }
  }
  SparseGraph g;
  g.n = n;
  g.symmetric = true;
  g.entries.reserve(picked.size() * 2);
  for (auto [a, b] : picked) {
    g.entries.push_back({a, b, 1.0});
    g.entries.push_back({b, a, 1.0});
  }
  return g;
}

std::vector<MeasureSubgraph> build_measure_subgraphs(const FeatureMatrix& x,
                                                     const std::vector<MeasureKind>& measures,
                                                     int k) {
  if (measures.empty()) throw DomainError("build_measure_subgraphs: need at least one measure");
  std::vector<MeasureSubgraph> out;
  out.reserve(measures.size());
  for (MeasureKind m : measures) {
    if (m.tag == MeasureKind::Sparsity && m.k_s <= 0) m.k_s = k;
    MeasureSubgraph sub;
    sub.measure = m;
    sub.k = k;
    sub.similarity = similarity_matrix(x, m);
    sub.adjacency = knn_sparsify(sub.similarity, k);
    out.push_back(std::move(sub));
  }
  return out;
}

}  // namespace mlsg
