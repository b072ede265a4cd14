#include "glocal/sparse_graph.hpp"

#include <algorithm>
#include <cmath>

namespace glocal {

SparseGraph SparseGraph::build(const WeightedEdgeList& input, double threshold) {
    if (threshold < 0.0 || !std::isfinite(threshold))
        throw InputError("build: threshold must be finite and >= 0");

    // Normalize every entry to (min,max) and sum duplicates.
    std::vector<std::pair<std::pair<VertexId, VertexId>, double>> acc;
    acc.reserve(input.edges.size());
    for (const auto& e : input.edges) {
        if (e.u >= input.n || e.v >= input.n)
            throw InputError("build: vertex id " + std::to_string(std::max(e.u, e.v)) +
                             " out of range for n=" + std::to_string(input.n));
        if (e.w < 0.0 || !std::isfinite(e.w))
            throw InputError("build: negative or non-finite edge weight");
        if (e.u == e.v)
            continue; // self-loops are always discarded
        acc.push_back({{std::min(e.u, e.v), std::max(e.u, e.v)}, e.w});
    }
    std::sort(acc.begin(), acc.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    std::vector<std::pair<VertexId, VertexId>> kept;
    for (std::size_t i = 0; i < acc.size();) {
        std::size_t j = i;
        double sum = 0.0;
        while (j < acc.size() && acc[j].first == acc[i].first)
            sum += acc[j++].second;
        if (sum > threshold)
            kept.push_back(acc[i].first);
        i = j;
    }
    return from_undirected_pairs(input.n, std::move(kept));
}

SparseGraph SparseGraph::from_undirected_pairs(VertexId n,
                                               std::vector<std::pair<VertexId, VertexId>> pairs) {
    SparseGraph g;
    g.n_ = n;
    g.m_ = pairs.size();
    g.row_ptr_.assign(static_cast<std::size_t>(n) + 1, 0);
    for (const auto& [u, v] : pairs) {
        g.row_ptr_[u + 1]++;
        g.row_ptr_[v + 1]++;
    }
    for (std::size_t i = 1; i < g.row_ptr_.size(); ++i)
        g.row_ptr_[i] += g.row_ptr_[i - 1];
    g.col_idx_.resize(2 * g.m_);
    std::vector<EdgeCount> cursor(g.row_ptr_.begin(), g.row_ptr_.end() - 1);
    for (const auto& [u, v] : pairs) {
        g.col_idx_[cursor[u]++] = v;
        g.col_idx_[cursor[v]++] = u;
    }
    for (VertexId u = 0; u < n; ++u)
        std::sort(g.col_idx_.begin() + static_cast<std::ptrdiff_t>(g.row_ptr_[u]),
                  g.col_idx_.begin() + static_cast<std::ptrdiff_t>(g.row_ptr_[u + 1]));
    return g;
}

bool SparseGraph::has_edge(VertexId u, VertexId v) const {
    auto row = neighbors(u);
    return std::binary_search(row.begin(), row.end(), v);
}

std::vector<double> SparseGraph::matvec(std::span<const double> x) const {
    if (x.size() != n_)
        throw InputError("matvec: vector length " + std::to_string(x.size()) +
                         " does not match n=" + std::to_string(n_));
    std::vector<double> y(n_, 0.0);
    for (VertexId u = 0; u < n_; ++u) {
        double s = 0.0;
        for (VertexId v : neighbors(u))
            s += x[v];
        y[u] = s;
    }
    return y;
}

SparseGraph SparseGraph::permute(std::span<const VertexId> pi) const {
    if (pi.size() != n_)
        throw InputError("permute: mapping length does not match n");
    std::vector<bool> seen(n_, false);
    for (VertexId image : pi) {
        if (image >= n_ || seen[image])
            throw InputError("permute: mapping is not a bijection on [0,n)");
        seen[image] = true;
    }
    std::vector<std::pair<VertexId, VertexId>> pairs;
    pairs.reserve(m_);
    for (VertexId u = 0; u < n_; ++u)
        for (VertexId v : neighbors(u))
            if (u < v)
                pairs.push_back({std::min(pi[u], pi[v]), std::max(pi[u], pi[v])});
    return from_undirected_pairs(n_, std::move(pairs));
}

std::pair<SparseGraph, std::vector<VertexId>>
SparseGraph::induced_subgraph(std::span<const VertexId> keep) const {
    constexpr VertexId kUnset = static_cast<VertexId>(-1);
    std::vector<VertexId> new_id(n_, kUnset);
    for (std::size_t i = 0; i < keep.size(); ++i) {
        if (keep[i] >= n_)
            throw InputError("induced_subgraph: vertex id out of range");
        if (i > 0 && keep[i] <= keep[i - 1])
            throw InputError("induced_subgraph: keep set must be strictly ascending");
        new_id[keep[i]] = static_cast<VertexId>(i);
    }
    std::vector<std::pair<VertexId, VertexId>> pairs;
    for (VertexId old_u : keep)
        for (VertexId old_v : neighbors(old_u))
            if (old_u < old_v && new_id[old_v] != kUnset)
                pairs.push_back({new_id[old_u], new_id[old_v]});
    return {from_undirected_pairs(static_cast<VertexId>(keep.size()), std::move(pairs)),
            std::vector<VertexId>(keep.begin(), keep.end())};
}

} // namespace glocal
