#include "doctest.h"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "glocal/pipeline.hpp"
#include "testutil.hpp"

using namespace glocal;
using namespace testutil;

namespace {

std::string k3_text() { return "0 1\n0 2\n1 2\n"; }

void write_text(const std::string& path, const std::string& text) {
    io::write_file_atomic(path, text);
}

pipeline::RunConfig compute_config(const std::string& input, const std::string& out,
                                   const std::string& invariants) {
    pipeline::RunConfig config;
    config.input_path = input;
    config.out_dir = out;
    config.invariants = parse_invariant_selection(invariants);
    return config;
}

} // namespace

TEST_CASE("compute writes per-invariant files and metadata") {
    TempDir dir;
    write_text(dir.file("k3.edges"), k3_text());

    pipeline::RunConfig config = compute_config(dir.file("k3.edges"), dir.file("out"), "deg");
    auto result = pipeline::run_compute(config);
    auto files = pipeline::write_outputs(config.out_dir, config, result);
    CHECK(files == std::vector<std::string>{"degree.csv", "invariants.csv", "metadata.json"});

    CHECK(io::read_file(dir.file("out/degree.csv")) == "vertex,degree\n0,2\n1,2\n2,2\n");

    auto meta = nlohmann::json::parse(io::read_file(dir.file("out/metadata.json")));
    CHECK(meta.at("n") == 3);
    CHECK(meta.at("m") == 3);
    CHECK(meta.at("K") == 0);
    CHECK(meta.at("lcc") == false);
    CHECK(meta.at("invariants") == "deg");
    CHECK(meta.at("timings").contains("degree"));
    CHECK_FALSE(meta.contains("vertex_map"));
}

TEST_CASE("compute resolves spectral invariants") {
    TempDir dir;
    write_text(dir.file("k3.edges"), k3_text());

    pipeline::RunConfig config = compute_config(dir.file("k3.edges"), dir.file("out"), "nl3");
    config.eigs_k = 3;
    auto result = pipeline::run_compute(config);
    auto files = pipeline::write_outputs(config.out_dir, config, result);
    CHECK(files == std::vector<std::string>{"eigenvalues.csv", "invariants.csv", "metadata.json",
                                            "nl3.csv"});

    std::istringstream nl3_in(io::read_file(dir.file("out/nl3.csv")));
    for (double v : io::read_vector_csv(nl3_in))
        CHECK(v == doctest::Approx(1.0).epsilon(1e-6));

    auto meta = nlohmann::json::parse(io::read_file(dir.file("out/metadata.json")));
    CHECK(meta.at("K") == 3);
    CHECK(meta.at("timings").contains("eigendecomposition"));
}

TEST_CASE("compute with --lcc restricts to the giant component") {
    TempDir dir;
    write_text(dir.file("two.edges"), "%n 5\n0 1\n1 2\n3 4\n");

    pipeline::RunConfig config = compute_config(dir.file("two.edges"), dir.file("out"), "deg");
    config.lcc = true;
    auto result = pipeline::run_compute(config);
    pipeline::write_outputs(config.out_dir, config, result);

    std::istringstream deg_in(io::read_file(dir.file("out/degree.csv")));
    CHECK(io::read_vector_csv(deg_in) == std::vector<double>{1, 2, 1});

    auto meta = nlohmann::json::parse(io::read_file(dir.file("out/metadata.json")));
    CHECK(meta.at("n") == 3);
    CHECK(meta.at("lcc") == true);
    CHECK(meta.at("vertex_map") == nlohmann::json::array({0, 1, 2}));
}

TEST_CASE("lcc flag is a no-op on an already-connected graph") {
    TempDir dir;
    write_text(dir.file("k3.edges"), k3_text());

    pipeline::RunConfig plain = compute_config(dir.file("k3.edges"), dir.file("a"), "deg,ss1");
    auto plain_result = pipeline::run_compute(plain);
    pipeline::write_outputs(plain.out_dir, plain, plain_result);

    pipeline::RunConfig with_lcc = compute_config(dir.file("k3.edges"), dir.file("b"), "deg,ss1");
    with_lcc.lcc = true;
    auto lcc_result = pipeline::run_compute(with_lcc);
    pipeline::write_outputs(with_lcc.out_dir, with_lcc, lcc_result);

    CHECK(io::read_file(dir.file("a/degree.csv")) == io::read_file(dir.file("b/degree.csv")));
    CHECK(io::read_file(dir.file("a/ss1.csv")) == io::read_file(dir.file("b/ss1.csv")));
    for (VertexId v = 0; v < 3; ++v)
        CHECK(lcc_result.vertex_map[v] == v);
}

TEST_CASE("glcv output format emits binary invariant files") {
    TempDir dir;
    write_text(dir.file("k3.edges"), k3_text());

    pipeline::RunConfig config = compute_config(dir.file("k3.edges"), dir.file("out"), "deg");
    config.output_format = pipeline::OutputFormat::Glcv;
    auto result = pipeline::run_compute(config);
    auto files = pipeline::write_outputs(config.out_dir, config, result);
    CHECK(files == std::vector<std::string>{"degree.glcv", "invariants.csv", "metadata.json"});

    std::istringstream in(io::read_file(dir.file("out/degree.glcv")));
    CHECK(std::get<std::vector<double>>(io::read_vector_binary(in)) ==
          std::vector<double>{2, 2, 2});
}

TEST_CASE("empty graphs are rejected before compute") {
    TempDir dir;
    write_text(dir.file("empty.edges"), "");
    pipeline::RunConfig config = compute_config(dir.file("empty.edges"), dir.file("out"), "deg");
    CHECK_THROWS_AS(pipeline::run_compute(config), InputError);
    CHECK_THROWS_AS(pipeline::run_compute(
                        compute_config(dir.file("missing.edges"), dir.file("out"), "deg")),
                    InputError);
}

TEST_CASE("job config documents") {
    pipeline::RunConfig config = pipeline::config_from_json(
        R"({"invariants": ["deg", "lp"], "threshold": 0.5, "lcc": true, "eigs": 7,
            "lp_dim": 3, "tol": 1e-6, "max_iter": 500, "lp_scaled": false,
            "output_format": "glcv", "input_format": "matrixmarket"})");
    CHECK(config.invariants.deg);
    CHECK(config.invariants.lp);
    CHECK_FALSE(config.invariants.ss1);
    CHECK(config.threshold == 0.5);
    CHECK(config.lcc);
    CHECK(config.eigs_k == 7);
    CHECK(config.lp_dim == 3);
    CHECK_FALSE(config.lp_scaled);
    CHECK(config.tol == 1e-6);
    CHECK(config.max_iter == 500);
    CHECK(config.output_format == pipeline::OutputFormat::Glcv);
    CHECK(config.input_format == io::GraphFormat::MatrixMarket);

    pipeline::RunConfig defaults =
        pipeline::config_from_json(R"({"invariants": "deg,ss1,nl3,cc,lp"})");
    CHECK(defaults.eigs_k == 100);
    CHECK(defaults.lp_dim == -1);
    CHECK(defaults.threshold == 0.0);
    CHECK(defaults.lp_scaled);

    CHECK_THROWS_AS(pipeline::config_from_json("not json"), InputError);
    CHECK_THROWS_AS(pipeline::config_from_json("[1,2]"), InputError);
    CHECK_THROWS_AS(pipeline::config_from_json(R"({"invariants": []})"), InputError);
    CHECK(pipeline::config_from_json(R"({})").invariants.any()); // omitted: all five
    CHECK_THROWS_AS(pipeline::config_from_json(R"({"invariants": "deg", "bogus": 1})"),
                    InputError);
    CHECK_THROWS_AS(pipeline::config_from_json(R"({"invariants": "deg", "eigs": 0})"),
                    InputError);
    CHECK_THROWS_AS(
        pipeline::config_from_json(R"({"invariants": "lp", "eigs": 2, "lp_dim": 5})"),
        InputError);
    CHECK_THROWS_AS(pipeline::config_from_json(R"({"invariants": "deg", "tol": 0})"),
                    InputError);
    CHECK_THROWS_AS(
        pipeline::config_from_json(R"({"invariants": "deg", "output_format": "xml"})"),
        InputError);
    CHECK_THROWS_AS(pipeline::config_from_json(R"({"invariants": "deg", "threshold": "a"})"),
                    InputError);
}

TEST_CASE("byte conversions cover the four supported pairs") {
    std::vector<double> values{1.5, -2.0, 3.25};
    std::ostringstream csv_out;
    io::write_vector_csv(csv_out, "value", values);
    const std::string csv = csv_out.str();

    const std::string glcv =
        pipeline::convert_bytes(csv, pipeline::FileKind::CsvVector, pipeline::FileKind::GlcvVector);
    {
        std::istringstream in(glcv);
        CHECK(std::get<std::vector<double>>(io::read_vector_binary(in)) == values);
    }
    const std::string csv_back = pipeline::convert_bytes(glcv, pipeline::FileKind::GlcvVector,
                                                         pipeline::FileKind::CsvVector);
    CHECK(csv_back == csv);

    const std::string edges = "%n 3\n0 1 1\n1 2 1\n";
    const std::string mm = pipeline::convert_bytes(edges, pipeline::FileKind::EdgeList,
                                                   pipeline::FileKind::MatrixMarket);
    CHECK(mm.rfind("%%MatrixMarket matrix coordinate real symmetric\n", 0) == 0);
    const std::string edges_back =
        pipeline::convert_bytes(mm, pipeline::FileKind::MatrixMarket, pipeline::FileKind::EdgeList);
    {
        std::istringstream a(edges), b(edges_back);
        CHECK(SparseGraph::build(io::read_edge_list(a)) == SparseGraph::build(io::read_edge_list(b)));
    }

    CHECK_THROWS_AS(pipeline::convert_bytes(csv, pipeline::FileKind::CsvVector,
                                            pipeline::FileKind::CsvVector),
                    InputError);
    CHECK_THROWS_AS(pipeline::convert_bytes(csv, pipeline::FileKind::CsvVector,
                                            pipeline::FileKind::MatrixMarket),
                    InputError);
    CHECK_THROWS_AS(pipeline::parse_file_kind("xml"), InputError);
}

TEST_CASE("bench verifies agreement and reports timings") {
    TempDir dir;
    std::ostringstream edges;
    io::write_edge_list(edges, erdos_renyi_list(80, 0.1, 1234));
    write_text(dir.file("g.edges"), edges.str());

    pipeline::RunConfig config;
    config.input_path = dir.file("g.edges");
    config.invariants = parse_invariant_selection("deg,ss1,nl3,cc,lp");
    config.eigs_k = 4;

    SparseGraph g = pipeline::load_graph(config);
    pipeline::BenchReport report = pipeline::run_bench(g, config);
    REQUIRE(report.independent.size() == 5);
    CHECK(report.independent[0].name == "deg");
    CHECK(report.independent_total > 0.0);
    CHECK(report.chained_total > 0.0);
    CHECK(report.ratio > 0.0);

    const std::string rendered = pipeline::render_bench_report(report);
    CHECK(rendered.find("chained/independent ratio:") != std::string::npos);
    CHECK(rendered.find("eigendecomposition") != std::string::npos);

    pipeline::RunConfig deg_only = config;
    deg_only.invariants = parse_invariant_selection("deg");
    CHECK(pipeline::run_bench(g, deg_only).independent.size() == 1);
}
