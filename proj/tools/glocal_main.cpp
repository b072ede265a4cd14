#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "glocal/components.hpp"
#include "glocal/eigensolver.hpp"
#include "glocal/invariants.hpp"
#include "glocal/io.hpp"
#include "glocal/oracle.hpp"
#include "glocal/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

struct CommonFlags {
    std::string input;
    std::string format = "auto";
    double threshold = 0.0;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--input", flags.input, "input graph file")->required();
    cmd->add_option("--format", flags.format,
                    "input format (auto detects Matrix Market by .mtx/.mm extension)")
        ->check(CLI::IsMember({"auto", "edgelist", "matrixmarket"}));
    cmd->add_option("--threshold", flags.threshold,
                    "keep an edge iff its summed weight is strictly greater");
}

std::optional<glocal::io::GraphFormat> format_from(const std::string& name) {
    if (name == "edgelist")
        return glocal::io::GraphFormat::EdgeList;
    if (name == "matrixmarket")
        return glocal::io::GraphFormat::MatrixMarket;
    return std::nullopt;
}

glocal::pipeline::RunConfig base_config(const CommonFlags& flags) {
    glocal::pipeline::RunConfig config;
    config.input_path = flags.input;
    config.input_format = format_from(flags.format);
    config.threshold = flags.threshold;
    return config;
}

double max_abs_deviation(const std::vector<double>& a, const std::vector<double>& b) {
    double dev = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        dev = std::max(dev, std::abs(a[i] - b[i]));
    return dev;
}

int run_verify(const CommonFlags& flags) {
    using namespace glocal;
    SparseGraph g = pipeline::load_graph(base_config(flags));
    if (g.num_vertices() == 0)
        throw InputError("graph has no vertices");

    const auto ss1 = scan_statistic_1(g);
    const auto ss1_oracle = oracle::brute_scan_statistic(g);
    const double ss1_dev = max_abs_deviation(ss1.values, ss1_oracle.values);

    const auto nl3 = local_triangles_exact(g);
    const auto nl3_oracle = oracle::brute_triangles(g);
    const double nl3_dev = max_abs_deviation(nl3.values, nl3_oracle.values);

    const EigenPairs eigs = top_eigenpairs(g, static_cast<int>(g.num_vertices()));
    const auto nl3_approx = local_triangles_approx(eigs);
    const double approx_dev = max_abs_deviation(nl3_approx.values, nl3_oracle.values);

    std::printf("ss1 max deviation:                 %s\n", io::render_real(ss1_dev).c_str());
    std::printf("nl3 exact max deviation:           %s\n", io::render_real(nl3_dev).c_str());
    std::printf("nl3 full-spectrum max deviation:   %s\n", io::render_real(approx_dev).c_str());
    if (ss1_dev != 0.0 || nl3_dev != 0.0) {
        std::fprintf(stderr, "error: exact invariants deviate from the reference oracles\n");
        return kExitNumeric;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"glocal: per-vertex graph invariants over sparse adjacency"};
    app.require_subcommand(1);

    CommonFlags compute_flags;
    std::string invariants = "deg,ss1,nl3,cc,lp";
    bool lcc = false;
    int eigs_k = 100;
    int lp_dim = -1;
    bool lp_no_scale = false;
    double tol = glocal::kDefaultEigTol;
    int max_iter = -1;
    std::string out_dir;
    std::string output_format = "csv";

    auto* compute = app.add_subcommand("compute", "compute invariants and write result files");
    add_common(compute, compute_flags);
    compute->add_option("--invariants", invariants, "comma list from deg,ss1,nl3,cc,lp")
        ->required();
    compute->add_flag("--lcc", lcc, "restrict to the largest connected component first");
    compute->add_option("--eigs", eigs_k, "number of top eigenpairs K");
    compute->add_option("--lp-dim", lp_dim, "latent position dimension (default min(K,100))");
    compute->add_flag("--lp-no-scale", lp_no_scale, "skip the sqrt(|lambda|) column scaling");
    compute->add_option("--tol", tol, "eigensolver residual tolerance");
    compute->add_option("--max-iter", max_iter, "eigensolver iteration budget");
    compute->add_option("--out", out_dir, "output directory")->required();
    compute->add_option("--output-format", output_format, "per-invariant file format")
        ->check(CLI::IsMember({"csv", "glcv"}));

    CommonFlags lcc_flags;
    std::string lcc_out;
    auto* lcc_cmd = app.add_subcommand("lcc", "extract the largest connected component");
    add_common(lcc_cmd, lcc_flags);
    lcc_cmd->add_option("--out", lcc_out, "output directory")->required();

    std::string conv_input, conv_output, conv_from, conv_to;
    auto* convert = app.add_subcommand("convert", "translate between file formats");
    convert->add_option("--input", conv_input, "input file")->required();
    convert->add_option("--output", conv_output, "output file")->required();
    convert->add_option("--from", conv_from, "input kind")
        ->required()
        ->check(CLI::IsMember({"edgelist", "matrixmarket", "csv", "glcv"}));
    convert->add_option("--to", conv_to, "output kind")
        ->required()
        ->check(CLI::IsMember({"edgelist", "matrixmarket", "csv", "glcv"}));

    CommonFlags bench_flags;
    std::string bench_invariants = "deg,ss1,nl3,cc,lp";
    int bench_eigs = 100;
    int bench_lp_dim = -1;
    double bench_tol = glocal::kDefaultEigTol;
    int bench_max_iter = -1;
    auto* bench = app.add_subcommand("bench",
                                     "time invariants computed independently vs in one pass");
    add_common(bench, bench_flags);
    bench->add_option("--invariants", bench_invariants, "comma list from deg,ss1,nl3,cc,lp");
    bench->add_option("--eigs", bench_eigs, "number of top eigenpairs K");
    bench->add_option("--lp-dim", bench_lp_dim, "latent position dimension");
    bench->add_option("--tol", bench_tol, "eigensolver residual tolerance");
    bench->add_option("--max-iter", bench_max_iter, "eigensolver iteration budget");

    CommonFlags verify_flags;
    auto* verify = app.add_subcommand("verify",
                                      "check production invariants against exact oracles");
    add_common(verify, verify_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (compute->parsed()) {
            glocal::pipeline::RunConfig config = base_config(compute_flags);
            config.invariants = glocal::parse_invariant_selection(invariants);
            config.lcc = lcc;
            config.eigs_k = eigs_k;
            config.lp_dim = lp_dim;
            config.lp_scaled = !lp_no_scale;
            config.tol = tol;
            config.max_iter = max_iter;
            config.out_dir = out_dir;
            config.output_format = output_format == "glcv"
                                       ? glocal::pipeline::OutputFormat::Glcv
                                       : glocal::pipeline::OutputFormat::Csv;
            if (config.lp_dim != -1 && config.lp_dim > config.eigs_k)
                throw glocal::InputError("--lp-dim exceeds --eigs");
            auto result = glocal::pipeline::run_compute(config);
            auto files = glocal::pipeline::write_outputs(config.out_dir, config, result);
            std::printf("wrote %zu files to %s\n", files.size(), config.out_dir.c_str());
            return kExitOk;
        }
        if (lcc_cmd->parsed()) {
            glocal::SparseGraph g = glocal::pipeline::load_graph(base_config(lcc_flags));
            auto [sub, map] = glocal::largest_connected_component(g);
            std::filesystem::create_directories(lcc_out);
            {
                std::ostringstream out;
                glocal::io::write_edge_list(out, glocal::io::to_edge_list(sub));
                glocal::io::write_file_atomic(lcc_out + "/lcc.edges", std::move(out).str());
            }
            {
                std::vector<std::uint64_t> original(map.begin(), map.end());
                std::ostringstream out;
                glocal::io::write_vector_csv(out, "original_id", original);
                glocal::io::write_file_atomic(lcc_out + "/vertex_map.csv",
                                              std::move(out).str());
            }
            std::printf("wrote lcc.edges and vertex_map.csv to %s (n=%u, m=%llu)\n",
                        lcc_out.c_str(), sub.num_vertices(),
                        static_cast<unsigned long long>(sub.num_edges()));
            return kExitOk;
        }
        if (convert->parsed()) {
            const std::string data = glocal::io::read_file(conv_input);
            const std::string out =
                glocal::pipeline::convert_bytes(data, glocal::pipeline::parse_file_kind(conv_from),
                                                glocal::pipeline::parse_file_kind(conv_to));
            glocal::io::write_file_atomic(conv_output, out);
            return kExitOk;
        }
        if (bench->parsed()) {
            glocal::pipeline::RunConfig config = base_config(bench_flags);
            config.invariants = glocal::parse_invariant_selection(bench_invariants);
            config.eigs_k = bench_eigs;
            config.lp_dim = bench_lp_dim;
            config.tol = bench_tol;
            config.max_iter = bench_max_iter;
            glocal::SparseGraph g = glocal::pipeline::load_graph(config);
            auto report = glocal::pipeline::run_bench(g, config);
            std::fputs(glocal::pipeline::render_bench_report(report).c_str(), stdout);
            return kExitOk;
        }
        if (verify->parsed())
            return run_verify(verify_flags);
    } catch (const glocal::NumericError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumeric;
    } catch (const glocal::InputError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInput;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInput;
    }
    return kExitUsage;
}
