#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "mlsg/types.hpp"

namespace mlsg {

/// Feature file: one comma-separated line per node (dense), or a header
/// "sparse n d" followed by "i j v" triplet lines.
FeatureMatrix read_features(const std::filesystem::path& path);

/// Edge file: "src dst" per line, 0-based ids, '#' comments ignored.
/// Self-loops and duplicates are removed, edges symmetrized by union,
/// weights binarized to 1.
SparseGraph read_edges(const std::filesystem::path& path, int n);

/// Label file: "node_id class_id" per line; absent nodes are unlabeled.
/// Returns labels and the class count C = max id + 1.
std::pair<IntVector, int> read_labels(const std::filesystem::path& path, int n);

/// Loads a full dataset and checks the per-class label counts.
LabeledDataset load_dataset(const std::filesystem::path& feature_path,
                            const std::filesystem::path& edge_path,
                            const std::filesystem::path& label_path);

void write_splits(const std::filesystem::path& path, const Splits& splits);
Splits read_splits(const std::filesystem::path& path);

// ---- binary matrix cache ("MLSG" container) ----------------------------

/// Header layout, little-endian:
///   magic "MLSG" | version u32 | dtype u32 (0=f64, 1=i64) | reserved u32
///   | aux u64 | rows u64 | cols u64 | row-major payload.
/// `aux` carries the node count when a graph is stored in triplet form.
void write_matrix(const std::filesystem::path& path, const Matrix& m, std::uint64_t aux = 0);
Matrix read_matrix(const std::filesystem::path& path, std::uint64_t* aux = nullptr);

void write_int_matrix(const std::filesystem::path& path,
                      const std::vector<std::int64_t>& values, std::uint64_t rows,
                      std::uint64_t cols, std::uint64_t aux = 0);
std::vector<std::int64_t> read_int_matrix(const std::filesystem::path& path,
                                          std::uint64_t* rows, std::uint64_t* cols,
                                          std::uint64_t* aux = nullptr);

/// Graphs are persisted in the same container as an nnz x 3 matrix of
/// (row, col, weight) triplets with aux = n.
void write_graph(const std::filesystem::path& path, const SparseGraph& graph);
SparseGraph read_graph(const std::filesystem::path& path);

void write_sparse(const std::filesystem::path& path, const SpMat& m);
SpMat read_sparse(const std::filesystem::path& path);

// ---- named-tensor checkpoint --------------------------------------------

using NamedMatrices = std::vector<std::pair<std::string, Matrix>>;

void write_checkpoint(const std::filesystem::path& path, const NamedMatrices& tensors);
NamedMatrices read_checkpoint(const std::filesystem::path& path);

// ---- plain-text tables ---------------------------------------------------

/// Tab-separated table with a header row; doubles printed with enough digits
/// to round-trip exactly.
void write_table(const std::filesystem::path& path, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows);
std::pair<std::vector<std::string>, std::vector<std::vector<std::string>>> read_table(
    const std::filesystem::path& path);

/// Formats a double so that strtod parses back the identical bits.
std::string format_double(double v);

/// FNV-1a 64-bit hash of a file's bytes; throws DataError if unreadable.
std::uint64_t hash_file(const std::filesystem::path& path);
std::uint64_t hash_bytes(const void* data, std::size_t size, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::uint64_t hash_string(const std::string& s, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace mlsg
