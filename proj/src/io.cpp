#include "mlsg/io.hpp"

#include <algorithm>
#include <bit>
#include <cerrno>
#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace mlsg {

static_assert(std::endian::native == std::endian::little,
              "cache container is defined little-endian");

namespace {

std::ifstream open_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

[[noreturn]] void parse_fail(const std::filesystem::path& path, int line_no,
                             const std::string& what) {
  throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + what);
}

bool blank_or_comment(const std::string& line) {
  for (char c : line) {
    if (c == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

FeatureMatrix read_features(const std::filesystem::path& path) {
  auto in = open_text(path);
  std::string line;
  int line_no = 0;

  // Peek the first meaningful line for the sparse header.
  std::streampos start = in.tellg();
  while (std::getline(in, line)) {
    ++line_no;
    if (!blank_or_comment(line)) break;
    start = in.tellg();
  }
  std::istringstream head(line);
  std::string tag;
  head >> tag;
  if (tag == "sparse") {
    long n = 0, d = 0;
    if (!(head >> n >> d) || n < 1 || d < 1) parse_fail(path, line_no, "bad sparse header");
    Matrix values = Matrix::Zero(n, d);
    while (std::getline(in, line)) {
      ++line_no;
      if (blank_or_comment(line)) continue;
      std::istringstream ls(line);
      long i, j;
      double v;
      if (!(ls >> i >> j >> v)) parse_fail(path, line_no, "expected 'i j v'");
      if (i < 0 || i >= n || j < 0 || j >= d) parse_fail(path, line_no, "feature index out of range");
      values(i, j) = v;
    }
    return FeatureMatrix(std::move(values));
  }

  // Dense: re-scan from the first meaningful line.
  std::vector<std::vector<double>> rows;
  in.clear();
  in.seekg(start);
  line_no -= 1;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank_or_comment(line)) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      char* end = nullptr;
      errno = 0;
      double v = std::strtod(cell.c_str(), &end);
      while (end && *end && std::isspace(static_cast<unsigned char>(*end))) ++end;
      if (end == cell.c_str() || (end && *end) || errno == ERANGE)
        parse_fail(path, line_no, "bad feature value '" + cell + "'");
      row.push_back(v);
    }
    if (row.empty()) parse_fail(path, line_no, "empty feature row");
    if (width == 0) width = row.size();
    if (row.size() != width) parse_fail(path, line_no, "inconsistent feature width");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError(path.string() + ": no feature rows");
  Matrix values(rows.size(), width);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < width; ++j) values(i, j) = rows[i][j];
  return FeatureMatrix(std::move(values));
}

SparseGraph read_edges(const std::filesystem::path& path, int n) {
  auto in = open_text(path);
  std::string line;
  int line_no = 0;
  std::set<std::pair<int, int>> edges;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank_or_comment(line)) continue;
    std::istringstream ls(line);
    long src, dst;
    if (!(ls >> src >> dst)) parse_fail(path, line_no, "expected 'src dst'");
    std::string rest;
    if (ls >> rest && rest[0] != '#') parse_fail(path, line_no, "trailing tokens");
    if (src < 0 || src >= n || dst < 0 || dst >= n)
      parse_fail(path, line_no, "node id out of range [0," + std::to_string(n) + ")");
    if (src == dst) continue;  // self-loops dropped
    int a = static_cast<int>(std::min(src, dst)), b = static_cast<int>(std::max(src, dst));
    edges.insert({a, b});
  }
  SparseGraph g;
  g.n = n;
  g.symmetric = true;
  g.entries.reserve(edges.size() * 2);
  for (auto [a, b] : edges) {
    g.entries.push_back({a, b, 1.0});
    g.entries.push_back({b, a, 1.0});
  }
  return g;
}

std::pair<IntVector, int> read_labels(const std::filesystem::path& path, int n) {
  auto in = open_text(path);
  std::string line;
  int line_no = 0;
  IntVector labels = IntVector::Constant(n, kUnlabeled);
  int max_class = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank_or_comment(line)) continue;
    std::istringstream ls(line);
    long node, cls;
    if (!(ls >> node >> cls)) parse_fail(path, line_no, "expected 'node_id class_id'");
    if (node < 0 || node >= n) parse_fail(path, line_no, "node id out of range");
    if (cls < 0) parse_fail(path, line_no, "negative class id");
    labels[node] = static_cast<int>(cls);
    max_class = std::max(max_class, static_cast<int>(cls));
  }
  return {labels, max_class + 1};
}

LabeledDataset load_dataset(const std::filesystem::path& feature_path,
                            const std::filesystem::path& edge_path,
                            const std::filesystem::path& label_path) {
  LabeledDataset ds;
  ds.features = read_features(feature_path);
  ds.topology = read_edges(edge_path, ds.n());
  auto [labels, num_classes] = read_labels(label_path, ds.n());
  ds.labels = labels;
  ds.num_classes = num_classes;
  if (num_classes < 2) throw DataError(label_path.string() + ": need at least 2 classes");
  std::vector<int> counts(num_classes, 0);
  for (int i = 0; i < ds.labels.size(); ++i)
    if (ds.labels[i] != kUnlabeled) counts[ds.labels[i]]++;
  for (int c = 0; c < num_classes; ++c)
    if (counts[c] < 1)
      throw DataError(label_path.string() + ": class " + std::to_string(c) + " has no nodes");
  ds.validate();
  return ds;
}

void write_splits(const std::filesystem::path& path, const Splits& splits) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  auto section = [&](const char* name, const std::vector<int>& ids) {
    out << name << ":\n";
    for (int id : ids) out << id << "\n";
  };
  section("train", splits.train);
  section("val", splits.val);
  section("test", splits.test);
}

Splits read_splits(const std::filesystem::path& path) {
  auto in = open_text(path);
  Splits s;
  std::vector<int>* current = nullptr;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank_or_comment(line)) continue;
    if (line == "train:") current = &s.train;
    else if (line == "val:") current = &s.val;
    else if (line == "test:") current = &s.test;
    else {
      if (!current) parse_fail(path, line_no, "id before section header");
      try {
        current->push_back(std::stoi(line));
      } catch (const std::exception&) {
        parse_fail(path, line_no, "bad node id '" + line + "'");
      }
    }
  }
  return s;
}

// ---- binary container ----------------------------------------------------

namespace {

constexpr char kMagic[4] = {'M', 'L', 'S', 'G'};
constexpr std::uint32_t kVersion = 1;

struct Header {
  std::uint32_t dtype = 0;
  std::uint64_t aux = 0, rows = 0, cols = 0;
};

void write_header(std::ofstream& out, const Header& h) {
  out.write(kMagic, 4);
  std::uint32_t v = kVersion, reserved = 0;
  out.write(reinterpret_cast<const char*>(&v), 4);
  out.write(reinterpret_cast<const char*>(&h.dtype), 4);
  out.write(reinterpret_cast<const char*>(&reserved), 4);
  out.write(reinterpret_cast<const char*>(&h.aux), 8);
  out.write(reinterpret_cast<const char*>(&h.rows), 8);
  out.write(reinterpret_cast<const char*>(&h.cols), 8);
}

Header read_header(std::ifstream& in, const std::filesystem::path& path) {
  char magic[4];
  std::uint32_t version = 0, reserved = 0;
  Header h;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), 4);
  in.read(reinterpret_cast<char*>(&h.dtype), 4);
  in.read(reinterpret_cast<char*>(&reserved), 4);
  in.read(reinterpret_cast<char*>(&h.aux), 8);
  in.read(reinterpret_cast<char*>(&h.rows), 8);
  in.read(reinterpret_cast<char*>(&h.cols), 8);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw DataError(path.string() + ": not an MLSG container");
  if (version != kVersion)
    throw DataError(path.string() + ": unsupported container version " + std::to_string(version));
  return h;
}

std::ofstream open_binary_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

std::ifstream open_binary_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

}  // namespace

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void write_matrix(const std::filesystem::path& path, const Matrix& m, std::uint64_t aux) {
  auto out = open_binary_out(path);
  Header h{0, aux, static_cast<std::uint64_t>(m.rows()), static_cast<std::uint64_t>(m.cols())};
  write_header(out, h);
  RowMajorMatrix rm = m;  // row-major payload
  out.write(reinterpret_cast<const char*>(rm.data()), static_cast<std::streamsize>(rm.size() * 8));
  if (!out) throw DataError("write failed: " + path.string());
}

Matrix read_matrix(const std::filesystem::path& path, std::uint64_t* aux) {
  auto in = open_binary_in(path);
  Header h = read_header(in, path);
  if (h.dtype != 0) throw DataError(path.string() + ": expected f64 payload");
  if (aux) *aux = h.aux;
  RowMajorMatrix rm(h.rows, h.cols);
  in.read(reinterpret_cast<char*>(rm.data()), static_cast<std::streamsize>(rm.size() * 8));
  if (!in) throw DataError(path.string() + ": truncated payload");
  return rm;
}

void write_int_matrix(const std::filesystem::path& path, const std::vector<std::int64_t>& values,
                      std::uint64_t rows, std::uint64_t cols, std::uint64_t aux) {
  if (values.size() != rows * cols) throw DimensionError("write_int_matrix: size mismatch");
  auto out = open_binary_out(path);
  Header h{1, aux, rows, cols};
  write_header(out, h);
  out.write(reinterpret_cast<const char*>(values.data()),
            static_cast<std::streamsize>(values.size() * 8));
  if (!out) throw DataError("write failed: " + path.string());
}

std::vector<std::int64_t> read_int_matrix(const std::filesystem::path& path, std::uint64_t* rows,
                                          std::uint64_t* cols, std::uint64_t* aux) {
  auto in = open_binary_in(path);
  Header h = read_header(in, path);
  if (h.dtype != 1) throw DataError(path.string() + ": expected i64 payload");
  std::vector<std::int64_t> values(h.rows * h.cols);
  in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size() * 8));
  if (!in) throw DataError(path.string() + ": truncated payload");
  if (rows) *rows = h.rows;
  if (cols) *cols = h.cols;
  if (aux) *aux = h.aux;
  return values;
}

void write_graph(const std::filesystem::path& path, const SparseGraph& graph) {
  Matrix trips(graph.entries.size(), 3);
  for (std::size_t i = 0; i < graph.entries.size(); ++i) {
    trips(i, 0) = graph.entries[i].row;
    trips(i, 1) = graph.entries[i].col;
    trips(i, 2) = graph.entries[i].weight;
  }
  write_matrix(path, trips, static_cast<std::uint64_t>(graph.n));
}

SparseGraph read_graph(const std::filesystem::path& path) {
  std::uint64_t aux = 0;
  Matrix trips = read_matrix(path, &aux);
  if (trips.cols() != 3 && trips.rows() != 0)
    throw DataError(path.string() + ": graph container must be nnz x 3");
  SparseGraph g;
  g.n = static_cast<int>(aux);
  g.entries.reserve(trips.rows());
  for (Eigen::Index i = 0; i < trips.rows(); ++i)
    g.entries.push_back(
        {static_cast<int>(trips(i, 0)), static_cast<int>(trips(i, 1)), trips(i, 2)});
  return g;
}

void write_sparse(const std::filesystem::path& path, const SpMat& m) {
  Matrix trips(m.nonZeros(), 3);
  Eigen::Index r = 0;
  for (int i = 0; i < m.outerSize(); ++i)
    for (SpMat::InnerIterator it(m, i); it; ++it) {
      trips(r, 0) = it.row();
      trips(r, 1) = it.col();
      trips(r, 2) = it.value();
      ++r;
    }
  write_matrix(path, trips, static_cast<std::uint64_t>(m.rows()));
}

SpMat read_sparse(const std::filesystem::path& path) {
  std::uint64_t aux = 0;
  Matrix trips = read_matrix(path, &aux);
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(trips.rows());
  for (Eigen::Index i = 0; i < trips.rows(); ++i)
    t.emplace_back(static_cast<int>(trips(i, 0)), static_cast<int>(trips(i, 1)), trips(i, 2));
  SpMat m(static_cast<int>(aux), static_cast<int>(aux));
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

void write_checkpoint(const std::filesystem::path& path, const NamedMatrices& tensors) {
  auto out = open_binary_out(path);
  out.write(kMagic, 4);
  std::uint32_t v = kVersion;
  std::uint32_t count = static_cast<std::uint32_t>(tensors.size());
  out.write(reinterpret_cast<const char*>(&v), 4);
  out.write(reinterpret_cast<const char*>(&count), 4);
  for (const auto& [name, m] : tensors) {
    std::uint32_t len = static_cast<std::uint32_t>(name.size());
    out.write(reinterpret_cast<const char*>(&len), 4);
    out.write(name.data(), len);
    std::uint64_t rows = m.rows(), cols = m.cols();
    out.write(reinterpret_cast<const char*>(&rows), 8);
    out.write(reinterpret_cast<const char*>(&cols), 8);
    RowMajorMatrix rm = m;
    out.write(reinterpret_cast<const char*>(rm.data()),
              static_cast<std::streamsize>(rm.size() * 8));
  }
  if (!out) throw DataError("write failed: " + path.string());
}

NamedMatrices read_checkpoint(const std::filesystem::path& path) {
  auto in = open_binary_in(path);
  char magic[4];
  std::uint32_t version = 0, count = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), 4);
  in.read(reinterpret_cast<char*>(&count), 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0 || version != kVersion)
    throw DataError(path.string() + ": not an MLSG checkpoint");
  NamedMatrices tensors;
  tensors.reserve(count);
  for (std::uint32_t k = 0; k < count; ++k) {
    std::uint32_t len = 0;
    in.read(reinterpret_cast<char*>(&len), 4);
    std::string name(len, '\0');
    in.read(name.data(), len);
    std::uint64_t rows = 0, cols = 0;
    in.read(reinterpret_cast<char*>(&rows), 8);
    in.read(reinterpret_cast<char*>(&cols), 8);
    RowMajorMatrix rm(rows, cols);
    in.read(reinterpret_cast<char*>(rm.data()), static_cast<std::streamsize>(rm.size() * 8));
    if (!in) throw DataError(path.string() + ": truncated checkpoint");
    tensors.emplace_back(std::move(name), Matrix(rm));
  }
  return tensors;
}

void write_table(const std::filesystem::path& path, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "\t" : "") << cells[i];
    out << "\n";
  };
  emit(header);
  for (const auto& row : rows) emit(row);
}

std::pair<std::vector<std::string>, std::vector<std::vector<std::string>>> read_table(
    const std::filesystem::path& path) {
  auto in = open_text(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t pos = 0;
    while (true) {
      std::size_t tab = line.find('\t', pos);
      cells.push_back(line.substr(pos, tab == std::string::npos ? tab : tab - pos));
      if (tab == std::string::npos) break;
      pos = tab + 1;
    }
    rows.push_back(std::move(cells));
  }
  if (rows.empty()) throw DataError(path.string() + ": empty table");
  std::vector<std::string> header = rows.front();
  rows.erase(rows.begin());
  return {header, rows};
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t hash_bytes(const void* data, std::size_t size, std::uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t hash_string(const std::string& s, std::uint64_t seed) {
  return hash_bytes(s.data(), s.size(), seed);
}

std::uint64_t hash_file(const std::filesystem::path& path) {
  auto in = open_binary_in(path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0)
    h = hash_bytes(buf, static_cast<std::size_t>(in.gcount()), h);
  return h;
}

}  // namespace mlsg
