#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "glocal/invariants.hpp"
#include "glocal/sparse_graph.hpp"

namespace glocal {
namespace io {

// Graph text formats ---------------------------------------------------------

enum class GraphFormat { EdgeList, MatrixMarket };

// Picks a graph format from a file name: .mtx / .mm mean Matrix Market,
// anything else is treated as an edge list.
GraphFormat detect_graph_format(const std::string& path);

// Edge list: one `u v` or `u v w` entry per line, `#` comment lines, blank
// lines ignored, optional `%n <count>` header pinning the vertex count.
WeightedEdgeList read_edge_list(std::istream& in);
void write_edge_list(std::ostream& out, const WeightedEdgeList& list);

// Matrix Market coordinate format, real/integer/pattern entries, general or
// symmetric. Indices are 1-based on disk and 0-based in memory.
WeightedEdgeList read_matrix_market(std::istream& in);
void write_matrix_market(std::ostream& out, const WeightedEdgeList& list);

WeightedEdgeList read_graph(std::istream& in, GraphFormat format);

// Flattens a built graph back into an edge list (unit weights, u < v pairs).
WeightedEdgeList to_edge_list(const SparseGraph& g);

// CSV ------------------------------------------------------------------------

// 17 significant digits, enough to round-trip any finite float64.
std::string render_real(double x);
double parse_real(const std::string& token);

// Combined per-vertex table: header `vertex,degree,ss1,nl3,cc`, one row per
// vertex, absent invariants leave their cells empty.
void write_invariants_csv(std::ostream& out, const InvariantBundle& bundle);

// Latent positions: header `vertex,lp_0,...,lp_{k-1}`.
void write_latent_positions_csv(std::ostream& out, const LatentPositionMatrix& lp);

// Single column of reals: header `vertex,<name>`, rows indexed 0..n-1 in
// order. The reader accepts any column name but requires dense indices.
void write_vector_csv(std::ostream& out, const std::string& name,
                      const std::vector<double>& values);
void write_vector_csv(std::ostream& out, const std::string& name,
                      const std::vector<std::uint64_t>& values);
std::vector<double> read_vector_csv(std::istream& in);

// GLCV binary vectors --------------------------------------------------------

// Layout, little-endian: 4-byte magic "GLCV", u8 version (1), u8 dtype
// (0 = float64, 1 = uint64), 6 reserved zero bytes, u64 element count,
// then count * 8 payload bytes.
using VectorPayload = std::variant<std::vector<double>, std::vector<std::uint64_t>>;

void write_vector_binary(std::ostream& out, const VectorPayload& values);
VectorPayload read_vector_binary(std::istream& in);

// File helpers ----------------------------------------------------------------

std::string read_file(const std::string& path);
// Writes to a sibling temp file and renames it over the target.
void write_file_atomic(const std::string& path, const std::string& data);

} // namespace io
} // namespace glocal
