#pragma once

#include "glocal/sparse_graph.hpp"

#include <vector>

namespace glocal {

/// Top eigenpairs of the adjacency matrix, ordered by descending |lambda|
/// (near-magnitude ties broken by descending algebraic value). Each vector
/// has unit 2-norm, the basis is orthogonal, and residuals[k] stores the
/// actually measured ||A x_k - lambda_k x_k||_2.
struct EigenPairs {
    std::vector<double> values;
    std::vector<std::vector<double>> vectors; // vectors[k] has length n
    std::vector<double> residuals;

    int k() const { return static_cast<int>(values.size()); }
};

inline constexpr double kDefaultEigTol = 1e-8;

/// Compute the min(K, n) largest-magnitude eigenpairs via Lanczos iteration
/// with full reorthogonalization. The starting vector is seeded
/// deterministically from n; on breakdown (an invariant subspace was found)
/// the iteration restarts in the orthogonal complement, which is what
/// recovers repeated eigenvalues. K > n is clamped to n with a warning.
/// Throws NumericError when fewer than K pairs reach
/// residual <= tol * max(1, |lambda_1|) within max_iter steps
/// (max_iter < 0 selects the default 20*K + 100).
EigenPairs top_eigenpairs(const SparseGraph& g, int K,
                          double tol = kDefaultEigTol, int max_iter = -1);

/// Shared output convention for every eigensolver in this project: sort by
/// (|lambda| desc, algebraic desc within near-magnitude ties) and flip each
/// vector so its largest-|entry| component (lowest index on ties) is
/// non-negative.
void canonicalize_eigenpairs(EigenPairs& eigs);

} // namespace glocal
