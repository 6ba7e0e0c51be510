#include "mlsg/fused_graph.hpp"

#include <algorithm>
#include <cmath>

namespace mlsg {

FusedGraph FusedGraph::build(const std::vector<SpMat>& subgraphs) {
  FusedGraph g;
  g.q_count = static_cast<int>(subgraphs.size());
  if (g.q_count < 1 || g.q_count > 8)
    throw DimensionError("FusedGraph: need 1..8 subgraphs");
  g.n = static_cast<int>(subgraphs[0].rows());

  // Union pattern per row, plus the diagonal slot.
  std::vector<std::vector<std::pair<int, std::uint8_t>>> rows(g.n);
  for (int q = 0; q < g.q_count; ++q) {
    const SpMat& a = subgraphs[q];
    if (a.rows() != g.n || a.cols() != g.n)
      throw DimensionError("FusedGraph: subgraph size mismatch");
    for (int i = 0; i < a.outerSize(); ++i)
      for (SpMat::InnerIterator it(a, i); it; ++it) {
        if (it.value() != 1.0)
          throw DomainError("FusedGraph: subgraphs must be binary");
        if (it.row() == it.col())
          throw DomainError("FusedGraph: subgraphs must have a zero diagonal");
        rows[it.row()].push_back({static_cast<int>(it.col()), static_cast<std::uint8_t>(1u << q)});
      }
  }
  g.outer.assign(g.n + 1, 0);
  for (int i = 0; i < g.n; ++i) {
    auto& r = rows[i];
    r.push_back({i, 0});  // diagonal slot, no measure bit
    std::sort(r.begin(), r.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    // Merge duplicate columns by OR-ing bits.
    std::size_t w = 0;
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (w > 0 && r[w - 1].first == r[k].first) r[w - 1].second |= r[k].second;
      else r[w++] = r[k];
    }
    r.resize(w);
    g.outer[i + 1] = g.outer[i] + static_cast<int>(w);
  }
  g.inner.resize(g.outer.back());
  g.qmask.resize(g.outer.back());
  for (int i = 0; i < g.n; ++i)
    for (std::size_t k = 0; k < rows[i].size(); ++k) {
      g.inner[g.outer[i] + k] = rows[i][k].first;
      g.qmask[g.outer[i] + k] = rows[i][k].second;
    }
  return g;
}

FusedGraph::State FusedGraph::forward(const Matrix& weights) const {
  if (weights.rows() != q_count || weights.cols() != n)
    throw DimensionError("FusedGraph::forward: weights must be Q x n");
  State st;
  st.afea.assign(slot_count(), 0.0);
  st.atil.assign(slot_count(), 0.0);
  st.degree = Vector::Ones(n);  // +I
  for (int i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (int s = outer[i]; s < outer[i + 1]; ++s) {
      const std::uint8_t mask = qmask[s];
      if (mask == 0) continue;  // diagonal slot
      const int j = inner[s];
      double v = 0.0;
      for (int q = 0; q < q_count; ++q)
        if (mask & (1u << q)) v += 0.5 * (weights(q, i) + weights(q, j));
      st.afea[s] = v;
      row_sum += v;
    }
    st.degree[i] += row_sum;
  }
  st.inv_sqrt = st.degree.array().rsqrt();
  for (int i = 0; i < n; ++i)
    for (int s = outer[i]; s < outer[i + 1]; ++s) {
      const int j = inner[s];
      const double b = st.afea[s] + (i == j ? 1.0 : 0.0);
      st.atil[s] = b * (st.inv_sqrt[i] * st.inv_sqrt[j]);
    }
  return st;
}

Eigen::Map<const SpMat> FusedGraph::matrix(const State& state) const {
  return Eigen::Map<const SpMat>(n, n, static_cast<Eigen::Index>(slot_count()), outer.data(),
                                 inner.data(), state.atil.data());
}

Matrix FusedGraph::backward(const State& state, const std::vector<double>& d_atil) const {
  if (d_atil.size() != slot_count())
    throw DimensionError("FusedGraph::backward: per-slot gradient size mismatch");

  // With independent ordered entries B[k,l] and row-sum degrees, each entry
  // Atil[i,j] = B[i,j] g_i g_j (g = d^{-1/2}) gives
  //   dB[k,l] = dAtil[k,l] g_k g_l - (r_k + c_k) / (2 d_k)
  // where r_k = sum_j dAtil[k,j] Atil[k,j] and c_k = sum_i dAtil[i,k] Atil[i,k];
  // both degree terms key on the row k because d depends on row sums only.
  Vector r = Vector::Zero(n), c = Vector::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int s = outer[i]; s < outer[i + 1]; ++s) {
      const double rc = d_atil[s] * state.atil[s];
      r[i] += rc;
      c[inner[s]] += rc;
    }

  Matrix d_weights = Matrix::Zero(q_count, n);
  for (int i = 0; i < n; ++i) {
    const double degree_term = 0.5 * (r[i] + c[i]) / state.degree[i];
    for (int s = outer[i]; s < outer[i + 1]; ++s) {
      const std::uint8_t mask = qmask[s];
      if (mask == 0) continue;  // dB on the diagonal hits the constant +I only
      const int j = inner[s];
      const double db = d_atil[s] * (state.inv_sqrt[i] * state.inv_sqrt[j]) - degree_term;
      const double half = 0.5 * db;
      for (int q = 0; q < q_count; ++q)
        if (mask & (1u << q)) {
          d_weights(q, i) += half;
          d_weights(q, j) += half;
        }
    }
  }
  return d_weights;
}

}  // namespace mlsg
