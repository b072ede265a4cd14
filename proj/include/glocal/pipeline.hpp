#pragma once

#include <optional>
#include <string>
#include <vector>

#include "glocal/invariants.hpp"
#include "glocal/io.hpp"
#include "glocal/sparse_graph.hpp"

namespace glocal {
namespace pipeline {

enum class OutputFormat { Csv, Glcv };

struct RunConfig {
    std::string input_path;
    std::optional<io::GraphFormat> input_format; // unset: detect from file name
    double threshold = 0.0;
    bool lcc = false;
    InvariantSelection invariants;
    int eigs_k = 100;
    int lp_dim = -1; // -1: min(eigs_k, 100)
    bool lp_scaled = true;
    double tol = kDefaultEigTol;
    int max_iter = -1; // -1: solver default
    std::string out_dir;
    OutputFormat output_format = OutputFormat::Csv;
};

struct ComputeResult {
    InvariantBundle bundle;
    // original vertex id per kept vertex, populated when the LCC was taken
    std::vector<VertexId> vertex_map;
};

SparseGraph load_graph(const RunConfig& config);
SparseGraph graph_from_bytes(const std::string& data, io::GraphFormat format, double threshold);

ComputeResult run_compute_on(const SparseGraph& g, const RunConfig& config);
ComputeResult run_compute(const RunConfig& config);

// Writes one file per computed invariant plus invariants.csv, eigenvalues.csv
// and metadata.json into dir (created if needed). Returns the file names.
std::vector<std::string> write_outputs(const std::string& dir, const RunConfig& config,
                                       const ComputeResult& result);

// Parses a job config document ({"invariants": [...], "threshold": ...}).
// Input/output locations are the caller's concern and not accepted here.
RunConfig config_from_json(const std::string& json_text);

enum class FileKind { EdgeList, MatrixMarket, CsvVector, GlcvVector };
FileKind parse_file_kind(const std::string& name);
std::string convert_bytes(const std::string& data, FileKind from, FileKind to);

struct BenchEntry {
    std::string name;
    double seconds = 0.0;
};

struct BenchReport {
    std::vector<BenchEntry> independent;
    double independent_total = 0.0;
    std::vector<StageTiming> chained_stages;
    double chained_total = 0.0;
    double ratio = 0.0;
};

// Runs every selected invariant in isolation, then all of them in one chained
// pass, verifies both modes produced identical values, and reports timings.
BenchReport run_bench(const SparseGraph& g, const RunConfig& config);
std::string render_bench_report(const BenchReport& report);

} // namespace pipeline
} // namespace glocal
