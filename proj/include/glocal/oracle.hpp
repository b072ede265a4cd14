#pragma once

#include "glocal/eigensolver.hpp"
#include "glocal/invariants.hpp"
#include "glocal/sparse_graph.hpp"

namespace glocal {
namespace oracle {

/// Brute-force references for testing and accuracy measurement. These
/// deliberately use different algorithms than the production paths (triple
/// loop instead of neighbor intersection, Jacobi instead of Lanczos) and
/// carry hard size guards.

inline constexpr VertexId kBruteForceMaxVertices = 2048;
inline constexpr VertexId kDenseSpectrumMaxVertices = 512;

/// Per-vertex triangle counts by enumerating all ordered triples u < v < w.
InvariantVector brute_triangles(const SparseGraph& g);

/// Per-vertex SS-1 by materializing each closed 1-hop neighborhood with
/// induced_subgraph and counting its edges.
InvariantVector brute_scan_statistic(const SparseGraph& g);

/// Full spectrum of the adjacency matrix via cyclic Jacobi rotations on a
/// dense mirror, canonicalized with the production sign/order convention.
EigenPairs dense_spectrum(const SparseGraph& g);

} // namespace oracle
} // namespace glocal
