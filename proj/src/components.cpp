#include "glocal/components.hpp"

namespace glocal {

ComponentLabeling connected_components(const SparseGraph& g) {
    constexpr VertexId kUnset = static_cast<VertexId>(-1);
    const VertexId n = g.num_vertices();
    ComponentLabeling out;
    out.labels.assign(n, kUnset);

    // Iterative BFS; no recursion so 1e7-vertex graphs cannot blow the stack.
    std::vector<VertexId> frontier;
    for (VertexId start = 0; start < n; ++start) {
        if (out.labels[start] != kUnset)
            continue;
        const VertexId label = out.count++;
        EdgeCount size = 0;
        out.labels[start] = label;
        frontier.assign(1, start);
        while (!frontier.empty()) {
            VertexId u = frontier.back();
            frontier.pop_back();
            ++size;
            for (VertexId v : g.neighbors(u)) {
                if (out.labels[v] == kUnset) {
                    out.labels[v] = label;
                    frontier.push_back(v);
                }
            }
        }
        out.sizes.push_back(size);
    }
    return out;
}

std::pair<SparseGraph, std::vector<VertexId>>
largest_connected_component(const SparseGraph& g) {
    if (g.num_vertices() == 0)
        throw InputError("largest_connected_component: empty graph");
    ComponentLabeling cl = connected_components(g);
    // Labels are ordered by smallest contained vertex, so the first argmax
    // realizes the documented tie-break.
    VertexId best = 0;
    for (VertexId c = 1; c < cl.count; ++c)
        if (cl.sizes[c] > cl.sizes[best])
            best = c;
    std::vector<VertexId> keep;
    keep.reserve(cl.sizes[best]);
    for (VertexId v = 0; v < g.num_vertices(); ++v)
        if (cl.labels[v] == best)
            keep.push_back(v);
    return g.induced_subgraph(keep);
}

} // namespace glocal
