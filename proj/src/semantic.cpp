#include "mlsg/semantic.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "mlsg/rng.hpp"

namespace mlsg {

void WalkConfig::validate() const {
  if (gamma < 1) throw DomainError("WalkConfig: gamma >= 1 required");
  if (path_len < 2) throw DomainError("WalkConfig: path_len >= 2 required");
  if (window < 1 || window > path_len)
    throw DomainError("WalkConfig: need 1 <= window <= path_len");
  if (tail_threshold < 0) throw DomainError("WalkConfig: tail_threshold >= 0 required");
  if (neg_shift < 1.0) throw DomainError("WalkConfig: neg_shift >= 1 required");
  if (max_walks_per_node < 0) throw DomainError("WalkConfig: max_walks_per_node >= 0 required");
}

std::int64_t FrequencyMatrix::at(int i, int j) const {
  auto lo = std::lower_bound(
      rows.begin(), rows.end(), i,
      [](int r, int key) { return r < key; });
  std::size_t idx = static_cast<std::size_t>(lo - rows.begin());
  for (; idx < rows.size() && rows[idx] == i; ++idx)
    if (cols[idx] == j) return counts[idx];
  return 0;
}

Matrix FrequencyMatrix::to_dense() const {
  Matrix m = Matrix::Zero(n, n);
  for (std::size_t k = 0; k < counts.size(); ++k)
    m(rows[k], cols[k]) = static_cast<double>(counts[k]);
  return m;
}

std::vector<std::int64_t> FrequencyMatrix::row_sums() const {
  std::vector<std::int64_t> s(n, 0);
  for (std::size_t k = 0; k < counts.size(); ++k) s[rows[k]] += counts[k];
  return s;
}

namespace {

/// Adjacency rows with cumulative weights for O(deg) transition sampling.
struct WalkIndex {
  std::vector<int> offsets;    // n + 1
  std::vector<int> neighbors;  // sorted per row
  std::vector<double> cum;     // cumulative weight per row segment
  std::vector<double> row_total;

  explicit WalkIndex(const SparseGraph& g) {
    std::vector<std::vector<std::pair<int, double>>> adj(g.n);
    for (const auto& e : g.entries) {
      if (e.weight < 0.0) throw DomainError("sample_walks: negative weight");
      if (e.weight > 0.0) adj[e.row].push_back({e.col, e.weight});
    }
    offsets.assign(g.n + 1, 0);
    row_total.assign(g.n, 0.0);
    for (int i = 0; i < g.n; ++i) {
      std::sort(adj[i].begin(), adj[i].end());
      offsets[i + 1] = offsets[i] + static_cast<int>(adj[i].size());
    }
    neighbors.resize(offsets.back());
    cum.resize(offsets.back());
    for (int i = 0; i < g.n; ++i) {
      double acc = 0.0;
      for (std::size_t k = 0; k < adj[i].size(); ++k) {
        acc += adj[i][k].second;
        neighbors[offsets[i] + static_cast<int>(k)] = adj[i][k].first;
        cum[offsets[i] + static_cast<int>(k)] = acc;
      }
      row_total[i] = acc;
    }
  }

  int step(int node, SplitMix64& rng) const {
    int lo = offsets[node], hi = offsets[node + 1];
    double u = rng.next_double() * row_total[node];
    // First cumulative weight strictly above u; matches p_j = w_ij / sum w.
    auto it = std::upper_bound(cum.begin() + lo, cum.begin() + hi, u);
    if (it == cum.begin() + hi) --it;  // u landed on the total due to rounding
    return neighbors[it - cum.begin()];
  }
};

}  // namespace

Matrix transition_matrix(const SparseGraph& graph) {
  Matrix t = Matrix::Zero(graph.n, graph.n);
  Vector row_sum = Vector::Zero(graph.n);
  for (const auto& e : graph.entries) {
    if (e.weight < 0.0) throw DomainError("transition_matrix: negative weight");
    row_sum[e.row] += e.weight;
  }
  for (const auto& e : graph.entries)
    if (row_sum[e.row] > 0.0) t(e.row, e.col) = e.weight / row_sum[e.row];
  for (int i = 0; i < graph.n; ++i)
    if (row_sum[i] == 0.0) t(i, i) = 1.0;  // isolated: unit self-loop row
  return t;
}

std::vector<std::vector<int>> sample_walks(const SparseGraph& graph, const WalkConfig& config,
                                           int threads) {
  config.validate();
  WalkIndex index(graph);
  IntVector deg = IntVector::Zero(graph.n);
  for (int i = 0; i < graph.n; ++i) deg[i] = index.offsets[i + 1] - index.offsets[i];

  std::vector<std::int64_t> walk_offset(graph.n + 1, 0);
  for (int v = 0; v < graph.n; ++v) {
    std::int64_t count = 0;
    if (deg[v] > config.tail_threshold) count = config.gamma;
    else if (deg[v] >= 1) count = static_cast<std::int64_t>(config.gamma) * deg[v];
    if (config.max_walks_per_node > 0) count = std::min<std::int64_t>(count, config.max_walks_per_node);
    walk_offset[v + 1] = walk_offset[v] + count;
  }

  std::vector<std::vector<int>> paths(walk_offset.back());
  auto run_node = [&](int v) {
    std::int64_t begin = walk_offset[v], end = walk_offset[v + 1];
    for (std::int64_t w = begin; w < end; ++w) {
      SplitMix64 rng = SplitMix64::stream(config.seed, static_cast<std::uint64_t>(v),
                                          static_cast<std::uint64_t>(w - begin));
      std::vector<int>& path = paths[w];
      path.resize(config.path_len + 1);
      path[0] = v;
      for (int s = 1; s <= config.path_len; ++s) path[s] = index.step(path[s - 1], rng);
    }
  };

  if (threads <= 1) {
    for (int v = 0; v < graph.n; ++v) run_node(v);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (int v = next.fetch_add(1); v < graph.n; v = next.fetch_add(1)) run_node(v);
      });
    for (auto& th : pool) th.join();
  }
  return paths;
}

namespace {

using CountMap = std::unordered_map<std::uint64_t, std::int64_t>;

void accumulate_range(const std::vector<std::vector<int>>& paths, std::size_t begin,
                      std::size_t end, int window, int n, CountMap& counts) {
  for (std::size_t p = begin; p < end; ++p) {
    const auto& path = paths[p];
    const int len = static_cast<int>(path.size());
    for (int s = 0; s < len; ++s) {
      if (path[s] < 0 || path[s] >= n)
        throw DataError("build_frequency: node id " + std::to_string(path[s]) +
                        " out of range [0," + std::to_string(n) + ")");
      for (int t = s + 1; t < len && t - s <= window; ++t) {
        std::uint64_t a = static_cast<std::uint64_t>(path[s]);
        std::uint64_t b = static_cast<std::uint64_t>(path[t]);
        std::uint64_t nn = static_cast<std::uint64_t>(n);
        counts[a * nn + b] += 1;
        counts[b * nn + a] += 1;
      }
    }
  }
}

}  // namespace

FrequencyMatrix build_frequency(const std::vector<std::vector<int>>& paths, int window, int n,
                                int threads) {
  if (window < 1) throw DomainError("build_frequency: window >= 1 required");
  if (n < 1) throw DomainError("build_frequency: n >= 1 required");

  CountMap counts;
  if (threads <= 1 || paths.size() < 1024) {
    accumulate_range(paths, 0, paths.size(), window, n, counts);
  } else {
    // Per-worker integer buffers merged by addition; schedule independent.
    std::vector<CountMap> local(threads);
    std::vector<std::thread> pool;
    std::size_t chunk = (paths.size() + threads - 1) / threads;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        std::size_t b = std::min(paths.size(), t * chunk);
        std::size_t e = std::min(paths.size(), (t + 1) * chunk);
        try {
          accumulate_range(paths, b, e, window, n, local[t]);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
    for (auto& m : local)
      for (auto [k, v] : m) counts[k] += v;
  }

  std::vector<std::uint64_t> keys;
  keys.reserve(counts.size());
  for (auto [k, v] : counts) keys.push_back(k);
  std::sort(keys.begin(), keys.end());

  FrequencyMatrix f;
  f.n = n;
  f.rows.reserve(keys.size());
  f.cols.reserve(keys.size());
  f.counts.reserve(keys.size());
  for (std::uint64_t k : keys) {
    f.rows.push_back(static_cast<int>(k / static_cast<std::uint64_t>(n)));
    f.cols.push_back(static_cast<int>(k % static_cast<std::uint64_t>(n)));
    f.counts.push_back(counts[k]);
    f.total += counts[k];
  }
  return f;
}

PpmiGraph compute_ppmi(const FrequencyMatrix& f, double neg_shift) {
  if (neg_shift < 1.0) throw DomainError("compute_ppmi: neg_shift >= 1 required");
  if (f.total <= 0) throw DataError("compute_ppmi: all-zero frequency matrix");

  const double total = static_cast<double>(f.total);
  std::vector<std::int64_t> row_sum = f.row_sums();
  std::vector<std::int64_t> col_sum(f.n, 0);
  for (std::size_t k = 0; k < f.nnz(); ++k) col_sum[f.cols[k]] += f.counts[k];

  PpmiGraph out;
  out.row_marginal = Vector::Zero(f.n);
  out.col_marginal = Vector::Zero(f.n);
  for (int i = 0; i < f.n; ++i) {
    out.row_marginal[i] = static_cast<double>(row_sum[i]) / total;
    out.col_marginal[i] = static_cast<double>(col_sum[i]) / total;
  }

  const double shift = std::log(neg_shift);
  std::vector<Eigen::Triplet<double>> p_trips, prob_trips;
  p_trips.reserve(f.nnz());
  prob_trips.reserve(f.nnz());
  for (std::size_t k = 0; k < f.nnz(); ++k) {
    const int i = f.rows[k], j = f.cols[k];
    const double c = static_cast<double>(f.counts[k]);
    prob_trips.emplace_back(i, j, c / total);
    // p_ij / (p_i* p_*j) == c * total / (row_sum * col_sum)
    const double ratio =
        c * total / (static_cast<double>(row_sum[i]) * static_cast<double>(col_sum[j]));
    const double v = std::log(ratio) - shift;
    if (v > 0.0) p_trips.emplace_back(i, j, v);
  }
  out.p = SpMat(f.n, f.n);
  out.p.setFromTriplets(p_trips.begin(), p_trips.end());
  out.prob = SpMat(f.n, f.n);
  out.prob.setFromTriplets(prob_trips.begin(), prob_trips.end());

  out.degree = Vector::Zero(f.n);
  for (int i = 0; i < out.p.outerSize(); ++i)
    for (SpMat::InnerIterator it(out.p, i); it; ++it) out.degree[it.row()] += it.value();
  out.p_norm = symmetric_normalize(out.p);
  return out;
}

SpMat symmetric_normalize(const SpMat& p) {
  Vector deg = Vector::Zero(p.rows());
  for (int i = 0; i < p.outerSize(); ++i)
    for (SpMat::InnerIterator it(p, i); it; ++it) {
      if (it.value() < 0.0) throw DomainError("symmetric_normalize: negative entry");
      deg[it.row()] += it.value();
    }
  Vector inv_sqrt(p.rows());
  for (Eigen::Index i = 0; i < deg.size(); ++i)
    inv_sqrt[i] = deg[i] > 0.0 ? 1.0 / std::sqrt(deg[i]) : 0.0;
  SpMat out = p;
  for (int i = 0; i < out.outerSize(); ++i)
    for (SpMat::InnerIterator it(out, i); it; ++it)
      it.valueRef() = it.value() * (inv_sqrt[it.row()] * inv_sqrt[it.col()]);
  return out;
}

Matrix symmetric_normalize(const Matrix& p) {
  if ((p.array() < 0.0).any()) throw DomainError("symmetric_normalize: negative entry");
  Vector deg = p.rowwise().sum();
  Vector inv_sqrt(p.rows());
  for (Eigen::Index i = 0; i < deg.size(); ++i)
    inv_sqrt[i] = deg[i] > 0.0 ? 1.0 / std::sqrt(deg[i]) : 0.0;
  return inv_sqrt.asDiagonal() * p * inv_sqrt.asDiagonal();
}

}  // namespace mlsg
