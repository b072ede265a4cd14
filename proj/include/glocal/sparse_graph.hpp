#pragma once

#include "glocal/common.hpp"

#include <span>
#include <vector>

namespace glocal {

/// Raw weighted input as read from disk, before thresholding.
/// Duplicate and reciprocal (u,v)/(v,u) entries are allowed here; their
/// weights are summed when the graph is built.
struct WeightedEdge {
    VertexId u;
    VertexId v;
    double w;
};

struct WeightedEdgeList {
    VertexId n = 0;
    std::vector<WeightedEdge> edges;
};

/// Immutable symmetric binary adjacency in CSR form.
///
/// Invariants held after build():
///   - structurally symmetric, no self-loops
///   - col_idx strictly increasing within each row
///   - row_ptr[n] == 2 * m  (each undirected edge stored in both rows)
///
/// Safe for concurrent reads once built.
class SparseGraph {
public:
    SparseGraph() = default;

    /// Threshold, binarize, symmetrize and de-loop a weighted edge list.
    /// Weights of duplicate and reciprocal entries are summed first; the
    /// edge {u,v} survives iff the summed weight is strictly greater than
    /// `threshold` and u != v.
    static SparseGraph build(const WeightedEdgeList& input, double threshold = 0.0);

    VertexId num_vertices() const { return n_; }
    EdgeCount num_edges() const { return m_; }

    std::span<const VertexId> neighbors(VertexId v) const {
        return {col_idx_.data() + row_ptr_[v], col_idx_.data() + row_ptr_[v + 1]};
    }
    VertexId degree(VertexId v) const {
        return static_cast<VertexId>(row_ptr_[v + 1] - row_ptr_[v]);
    }
    bool has_edge(VertexId u, VertexId v) const;

    const std::vector<EdgeCount>& row_ptr() const { return row_ptr_; }
    const std::vector<VertexId>& col_idx() const { return col_idx_; }

    /// y[u] = sum of x[v] over neighbors v of u. Fixed per-row reduction order.
    std::vector<double> matvec(std::span<const double> x) const;

    /// Relabel vertices: edge {pi(u), pi(v)} in the result iff {u,v} here.
    SparseGraph permute(std::span<const VertexId> pi) const;

    /// Subgraph induced by a strictly ascending vertex set, relabeled
    /// 0..|keep|-1 in order. Returns the graph and vertex_map[new] = old.
    std::pair<SparseGraph, std::vector<VertexId>>
    induced_subgraph(std::span<const VertexId> keep) const;

    bool operator==(const SparseGraph& other) const = default;

private:
    VertexId n_ = 0;
    EdgeCount m_ = 0; // undirected edges, counted once
    std::vector<EdgeCount> row_ptr_{0};
    std::vector<VertexId> col_idx_;

    static SparseGraph from_undirected_pairs(VertexId n,
                                             std::vector<std::pair<VertexId, VertexId>> pairs);
};

} // namespace glocal
