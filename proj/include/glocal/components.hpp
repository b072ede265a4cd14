#pragma once

#include "glocal/sparse_graph.hpp"

#include <vector>

namespace glocal {

/// Component ids are consecutive from 0, assigned in order of first
/// appearance by smallest contained vertex id (so label 0 holds vertex 0).
struct ComponentLabeling {
    std::vector<VertexId> labels;
    std::vector<EdgeCount> sizes;
    VertexId count = 0;
};

ComponentLabeling connected_components(const SparseGraph& g);

/// Extract the largest connected component as an induced subgraph.
/// Size ties go to the component containing the smallest vertex id.
/// Returns the subgraph and vertex_map[new] = old.
std::pair<SparseGraph, std::vector<VertexId>>
largest_connected_component(const SparseGraph& g);

} // namespace glocal
