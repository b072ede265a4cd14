#include "glocal/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "glocal/components.hpp"

namespace glocal {
namespace pipeline {

namespace {

double elapsed_seconds(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ComputeOptions options_from(const RunConfig& config) {
    ComputeOptions opts;
    opts.which = config.invariants;
    opts.eigs_k = config.eigs_k;
    opts.lp_dim = config.lp_dim;
    opts.lp_scaled = config.lp_scaled;
    opts.tol = config.tol;
    opts.max_iter = config.max_iter;
    return opts;
}

} // namespace

SparseGraph load_graph(const RunConfig& config) {
    if (config.input_path.empty())
        throw InputError("no input path given");
    const io::GraphFormat format =
        config.input_format ? *config.input_format : io::detect_graph_format(config.input_path);
    std::ifstream in(config.input_path, std::ios::binary);
    if (!in)
        throw InputError("cannot open '" + config.input_path + "' for reading");
    return SparseGraph::build(io::read_graph(in, format), config.threshold);
}

SparseGraph graph_from_bytes(const std::string& data, io::GraphFormat format, double threshold) {
    std::istringstream in(data);
    return SparseGraph::build(io::read_graph(in, format), threshold);
}

ComputeResult run_compute_on(const SparseGraph& g, const RunConfig& config) {
    if (g.num_vertices() == 0)
        throw InputError("graph has no vertices");
    ComputeResult result;
    const SparseGraph* target = &g;
    SparseGraph lcc_graph;
    if (config.lcc) {
        auto [sub, map] = largest_connected_component(g);
        lcc_graph = std::move(sub);
        result.vertex_map = std::move(map);
        target = &lcc_graph;
    }
    result.bundle = compute_all(*target, options_from(config));
    result.bundle.threshold = config.threshold;
    result.bundle.lcc_applied = config.lcc;
    return result;
}

ComputeResult run_compute(const RunConfig& config) {
    SparseGraph g = load_graph(config);
    return run_compute_on(g, config);
}

namespace {

void write_invariant_file(std::vector<std::string>& names, const std::string& dir,
                          OutputFormat format, const std::string& stem,
                          const std::vector<double>& values) {
    std::ostringstream out;
    std::string name;
    if (format == OutputFormat::Glcv) {
        name = stem + ".glcv";
        io::write_vector_binary(out, values);
    } else {
        name = stem + ".csv";
        io::write_vector_csv(out, stem, values);
    }
    io::write_file_atomic(dir + "/" + name, std::move(out).str());
    names.push_back(std::move(name));
}

} // namespace

std::vector<std::string> write_outputs(const std::string& dir, const RunConfig& config,
                                       const ComputeResult& result) {
    std::filesystem::create_directories(dir);
    const InvariantBundle& b = result.bundle;
    std::vector<std::string> names;

    if (b.deg)
        write_invariant_file(names, dir, config.output_format, "degree", *b.deg);
    if (b.ss1)
        write_invariant_file(names, dir, config.output_format, "ss1", *b.ss1);
    if (b.nl3)
        write_invariant_file(names, dir, config.output_format, "nl3", *b.nl3);
    if (b.cc)
        write_invariant_file(names, dir, config.output_format, "cc", *b.cc);
    if (b.lp) {
        std::ostringstream out;
        io::write_latent_positions_csv(out, *b.lp);
        io::write_file_atomic(dir + "/lp.csv", std::move(out).str());
        names.push_back("lp.csv");
    }
    if (b.deg || b.ss1 || b.nl3 || b.cc) {
        std::ostringstream out;
        io::write_invariants_csv(out, b);
        io::write_file_atomic(dir + "/invariants.csv", std::move(out).str());
        names.push_back("invariants.csv");
    }
    if (b.eigs_k > 0) {
        std::ostringstream out;
        out << "rank,eigenvalue\n";
        for (std::size_t i = 0; i < b.eigenvalues.size(); ++i)
            out << i << ',' << io::render_real(b.eigenvalues[i]) << '\n';
        io::write_file_atomic(dir + "/eigenvalues.csv", std::move(out).str());
        names.push_back("eigenvalues.csv");
    }

    nlohmann::json meta;
    meta["n"] = b.n;
    meta["m"] = b.m;
    meta["threshold"] = b.threshold;
    meta["K"] = b.eigs_k;
    meta["lcc"] = b.lcc_applied;
    meta["invariants"] = to_string(config.invariants);
    nlohmann::json timings = nlohmann::json::object();
    for (const auto& t : b.timings)
        timings[t.stage] = t.seconds;
    meta["timings"] = std::move(timings);
    if (b.lcc_applied)
        meta["vertex_map"] = result.vertex_map;
    io::write_file_atomic(dir + "/metadata.json", meta.dump(2) + "\n");
    names.push_back("metadata.json");

    std::sort(names.begin(), names.end());
    return names;
}

RunConfig config_from_json(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("config: ") + e.what());
    }
    if (!doc.is_object())
        throw InputError("config: expected a JSON object");

    RunConfig config;
    try {
        for (const auto& [key, value] : doc.items()) {
            if (key == "invariants") {
                std::string csv;
                if (value.is_string()) {
                    csv = value.get<std::string>();
                } else if (value.is_array()) {
                    for (const auto& item : value) {
                        if (!csv.empty())
                            csv += ',';
                        csv += item.get<std::string>();
                    }
                } else {
                    throw InputError("config: invariants must be a string or array");
                }
                config.invariants = parse_invariant_selection(csv);
            } else if (key == "threshold") {
                config.threshold = value.get<double>();
            } else if (key == "lcc") {
                config.lcc = value.get<bool>();
            } else if (key == "eigs" || key == "K") {
                config.eigs_k = value.get<int>();
            } else if (key == "lp_dim") {
                config.lp_dim = value.get<int>();
            } else if (key == "lp_scaled") {
                config.lp_scaled = value.get<bool>();
            } else if (key == "tol") {
                config.tol = value.get<double>();
            } else if (key == "max_iter") {
                config.max_iter = value.get<int>();
            } else if (key == "output_format") {
                const std::string f = value.get<std::string>();
                if (f == "csv")
                    config.output_format = OutputFormat::Csv;
                else if (f == "glcv")
                    config.output_format = OutputFormat::Glcv;
                else
                    throw InputError("config: unknown output_format '" + f + "'");
            } else if (key == "input_format") {
                const std::string f = value.get<std::string>();
                if (f == "edgelist")
                    config.input_format = io::GraphFormat::EdgeList;
                else if (f == "matrixmarket")
                    config.input_format = io::GraphFormat::MatrixMarket;
                else
                    throw InputError("config: unknown input_format '" + f + "'");
            } else {
                throw InputError("config: unknown key '" + key + "'");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("config: ") + e.what());
    }
    if (!config.invariants.any())
        throw InputError("config: invariants must be a nonempty subset");
    if (config.eigs_k < 1)
        throw InputError("config: eigs must be >= 1");
    if (config.lp_dim != -1 && config.lp_dim < 1)
        throw InputError("config: lp_dim must be >= 1");
    if (config.lp_dim > config.eigs_k)
        throw InputError("config: lp_dim exceeds eigs");
    if (!(config.tol > 0.0))
        throw InputError("config: tol must be positive");
    if (config.max_iter != -1 && config.max_iter < 1)
        throw InputError("config: max_iter must be >= 1");
    return config;
}

FileKind parse_file_kind(const std::string& name) {
    if (name == "edgelist")
        return FileKind::EdgeList;
    if (name == "matrixmarket")
        return FileKind::MatrixMarket;
    if (name == "csv")
        return FileKind::CsvVector;
    if (name == "glcv")
        return FileKind::GlcvVector;
    throw InputError("unknown format '" + name +
                     "' (expected edgelist, matrixmarket, csv or glcv)");
}

std::string convert_bytes(const std::string& data, FileKind from, FileKind to) {
    std::istringstream in(data);
    std::ostringstream out;
    if (from == FileKind::EdgeList && to == FileKind::MatrixMarket) {
        io::write_matrix_market(out, io::read_edge_list(in));
    } else if (from == FileKind::MatrixMarket && to == FileKind::EdgeList) {
        io::write_edge_list(out, io::read_matrix_market(in));
    } else if (from == FileKind::CsvVector && to == FileKind::GlcvVector) {
        io::write_vector_binary(out, io::read_vector_csv(in));
    } else if (from == FileKind::GlcvVector && to == FileKind::CsvVector) {
        std::visit([&](const auto& values) { io::write_vector_csv(out, "value", values); },
                   io::read_vector_binary(in));
    } else {
        throw InputError("unsupported conversion pair (supported: edgelist<->matrixmarket, "
                         "csv<->glcv)");
    }
    return std::move(out).str();
}

namespace {

const char* kBenchOrder[] = {"deg", "ss1", "nl3", "cc", "lp"};

InvariantSelection only(const char* name) {
    return parse_invariant_selection(name);
}

bool selected(const InvariantSelection& sel, const std::string& name) {
    if (name == "deg")
        return sel.deg;
    if (name == "ss1")
        return sel.ss1;
    if (name == "nl3")
        return sel.nl3;
    if (name == "cc")
        return sel.cc;
    return sel.lp;
}

void check_equal(bool ok, const std::string& name) {
    if (!ok)
        throw NumericError("bench: independent and chained outputs differ for " + name);
}

} // namespace

BenchReport run_bench(const SparseGraph& g, const RunConfig& config) {
    if (!config.invariants.any())
        throw InputError("bench: invariants must be a nonempty subset");

    BenchReport report;
    std::vector<InvariantBundle> singles;
    std::vector<std::string> names;
    for (const char* name : kBenchOrder) {
        if (!selected(config.invariants, name))
            continue;
        RunConfig one = config;
        one.invariants = only(name);
        auto t0 = std::chrono::steady_clock::now();
        singles.push_back(compute_all(g, options_from(one)));
        const double s = elapsed_seconds(t0);
        report.independent.push_back({name, s});
        report.independent_total += s;
        names.push_back(name);
    }

    auto t0 = std::chrono::steady_clock::now();
    InvariantBundle chained = compute_all(g, options_from(config));
    report.chained_total = elapsed_seconds(t0);
    report.chained_stages = chained.timings;
    report.ratio = report.independent_total > 0.0
                       ? report.chained_total / report.independent_total
                       : 1.0;

    for (std::size_t i = 0; i < names.size(); ++i) {
        const InvariantBundle& one = singles[i];
        const std::string& name = names[i];
        if (name == "deg")
            check_equal(one.deg == chained.deg, name);
        else if (name == "ss1")
            check_equal(one.ss1 == chained.ss1, name);
        else if (name == "nl3")
            check_equal(one.nl3 == chained.nl3, name);
        else if (name == "cc")
            check_equal(one.cc == chained.cc, name);
        else
            check_equal(one.lp && chained.lp && one.lp->n == chained.lp->n &&
                            one.lp->k == chained.lp->k && one.lp->scaled == chained.lp->scaled &&
                            one.lp->rows == chained.lp->rows,
                        name);
    }
    return report;
}

std::string render_bench_report(const BenchReport& report) {
    std::ostringstream out;
    out << "invariant  independent_seconds\n";
    char buf[64];
    for (const auto& e : report.independent) {
        std::snprintf(buf, sizeof(buf), "%-9s  %.6f\n", e.name.c_str(), e.seconds);
        out << buf;
    }
    std::snprintf(buf, sizeof(buf), "independent total: %.6f s\n", report.independent_total);
    out << buf;
    std::snprintf(buf, sizeof(buf), "chained total:     %.6f s\n", report.chained_total);
    out << buf;
    out << "chained stages:";
    for (const auto& t : report.chained_stages) {
        std::snprintf(buf, sizeof(buf), " %s=%.6f", t.stage.c_str(), t.seconds);
        out << buf;
    }
    out << '\n';
    std::snprintf(buf, sizeof(buf), "chained/independent ratio: %.4f\n", report.ratio);
    out << buf;
    return std::move(out).str();
}

} // namespace pipeline
} // namespace glocal
