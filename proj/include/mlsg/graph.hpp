#pragma once

#include "mlsg/types.hpp"

namespace mlsg {

/// Unweighted degree: number of distinct neighbors j != i with positive weight.
IntVector degrees(const SparseGraph& graph);

/// Symmetric renormalization D^{-1/2} (A + I) D^{-1/2}.
/// The self-loop is added exactly once; an isolated node row becomes the
/// unit self-loop. Throws DomainError on negative weights.
NormalizedGraph normalize_adjacency(const SparseGraph& graph);

/// Same map, sparse in and out, for large graphs.
SpMat normalize_adjacency_sparse(const SparseGraph& graph);

/// Largest eigenvalue magnitude by power iteration (test support).
double spectral_radius(const Matrix& a, int iterations = 200);

}  // namespace mlsg
