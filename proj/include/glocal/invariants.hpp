#pragma once

#include "glocal/eigensolver.hpp"
#include "glocal/sparse_graph.hpp"

#include <optional>
#include <string>
#include <vector>

namespace glocal {

enum class InvariantKind { Degree, ScanStat1, TrianglesApprox, TrianglesExact, ClusteringCoeff };

/// One per-vertex invariant over all n vertices.
struct InvariantVector {
    InvariantKind kind;
    std::vector<double> values;
};

/// Per-vertex embedding rows; column k comes from the k-th eigenvector,
/// multiplied by sqrt(|lambda_k|) when scaled (the default).
struct LatentPositionMatrix {
    VertexId n = 0;
    int k = 0;
    std::vector<double> rows; // row-major n x k
    bool scaled = true;

    double at(VertexId v, int j) const { return rows[static_cast<std::size_t>(v) * k + j]; }
};

/// deg(v) = |N(v)|, computed as A * 1.
InvariantVector degree(const SparseGraph& g);

/// SS-1: edge count of the subgraph induced by the closed 1-hop
/// neighborhood N_1[v] (v itself included), via sorted-adjacency
/// intersection. Equals deg(v) plus the number of edges among N(v).
InvariantVector scan_statistic_1(const SparseGraph& g);

/// Exact per-vertex triangle participation counts (sorted-list merge per
/// edge). Sum over vertices is 3x the total triangle count.
InvariantVector local_triangles_exact(const SparseGraph& g);

/// Spectral triangle approximation: nl3[v] = 1/2 * sum_k lambda_k^3 * x_vk^2.
/// Raw values are kept, including negatives.
InvariantVector local_triangles_approx(const EigenPairs& eigs);

/// cc[v] = 2*nl3[v] / (deg[v]*(deg[v]-1)); 0 when deg <= 1, and negative
/// nl3 inputs clamp the result to 0.
InvariantVector clustering_coefficient(const InvariantVector& deg, const InvariantVector& nl3);

/// First k eigenvector entries per vertex, optionally sqrt(|lambda|)-scaled.
LatentPositionMatrix latent_positions(const EigenPairs& eigs, int k, bool scaled = true);

struct InvariantSelection {
    bool deg = true;
    bool ss1 = true;
    bool nl3 = true;
    bool cc = true;
    bool lp = true;

    bool any() const { return deg || ss1 || nl3 || cc || lp; }
    bool needs_eigs() const { return nl3 || cc || lp; }
};

/// Parse a comma-separated subset like "deg,ss1,nl3,cc,lp".
InvariantSelection parse_invariant_selection(const std::string& csv);
std::string to_string(const InvariantSelection& sel);

struct ComputeOptions {
    InvariantSelection which;
    int eigs_k = 100;
    int lp_dim = -1; // < 0 means min(eigs_k, 100)
    bool lp_scaled = true;
    double tol = kDefaultEigTol;
    int max_iter = -1;

    int effective_lp_dim() const { return lp_dim < 0 ? std::min(eigs_k, 100) : lp_dim; }
};

struct StageTiming {
    std::string stage;
    double seconds;
};

/// Daisy-chained output set for one graph. Only requested invariants are
/// populated; timings list every stage that actually ran, so shared work
/// (one eigendecomposition, one degree pass) is visible there.
struct InvariantBundle {
    VertexId n = 0;
    EdgeCount m = 0;
    double threshold = 0.0; // filled by the pipeline
    bool lcc_applied = false;

    std::optional<std::vector<double>> deg;
    std::optional<std::vector<double>> ss1;
    std::optional<std::vector<double>> nl3;
    std::optional<std::vector<double>> cc;
    std::optional<LatentPositionMatrix> lp;

    std::vector<double> eigenvalues;
    int eigs_k = 0;
    std::vector<StageTiming> timings;
};

/// Compute the requested invariants, running the eigendecomposition and the
/// degree pass at most once each and reusing them downstream.
InvariantBundle compute_all(const SparseGraph& g, const ComputeOptions& opts);

} // namespace glocal
