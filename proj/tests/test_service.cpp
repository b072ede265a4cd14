#include "doctest.h"

#include "httplib.h"
#include "json.hpp"

#include <sstream>

#include "glocal/service.hpp"
#include "glocal/tar.hpp"
#include "testutil.hpp"

using namespace glocal;
using namespace testutil;

namespace {

service::ServiceConfig test_config(const TempDir& dir) {
    service::ServiceConfig config;
    config.listen_host = "127.0.0.1";
    config.listen_port = 0;
    config.data_dir = dir.file("data");
    config.workers = 1;
    return config;
}

httplib::MultipartFormDataItems job_parts(const std::string& graph, const std::string& config) {
    return {
        {"graph", graph, "g.edges", "application/octet-stream"},
        {"config", config, "config.json", "application/json"},
    };
}

std::string submit_ok(httplib::Client& cli, const std::string& graph, const std::string& config) {
    auto res = cli.Post("/api/v1/jobs", job_parts(graph, config));
    REQUIRE(res);
    REQUIRE(res->status == 202);
    auto body = nlohmann::json::parse(res->body);
    CHECK(body.at("state") == "queued");
    return body.at("id").get<std::string>();
}

const char* kK3 = "0 1\n0 2\n1 2\n";

} // namespace

TEST_CASE("job lifecycle over HTTP") {
    TempDir dir;
    service::Service svc(test_config(dir));
    const int port = svc.start();
    httplib::Client cli("127.0.0.1", port);

    const std::string id = submit_ok(cli, kK3, R"({"invariants": ["deg"]})");
    service::JobRecord record = svc.wait(id);
    CHECK(record.state == service::JobState::Done);

    auto status = cli.Get("/api/v1/jobs/" + id);
    REQUIRE(status);
    REQUIRE(status->status == 200);
    auto view = nlohmann::json::parse(status->body);
    CHECK(view.at("id") == id);
    CHECK(view.at("state") == "done");
    CHECK(view.contains("timings"));
    auto files = view.at("result_files").get<std::vector<std::string>>();
    CHECK(std::find(files.begin(), files.end(), "degree.csv") != files.end());

    auto result = cli.Get("/api/v1/jobs/" + id + "/result");
    REQUIRE(result);
    REQUIRE(result->status == 200);
    CHECK(result->get_header_value("Content-Type") == "application/x-tar");
    auto entries = tar::read_archive(result->body);
    REQUIRE(entries.size() == files.size());
    bool saw_degree = false;
    for (const auto& e : entries)
        if (e.name == "degree.csv") {
            saw_degree = true;
            CHECK(e.data == "vertex,degree\n0,2\n1,2\n2,2\n");
        }
    CHECK(saw_degree);

    // completed jobs stay completed
    auto again = cli.Get("/api/v1/jobs/" + id);
    CHECK(nlohmann::json::parse(again->body).at("state") == "done");
}

TEST_CASE("submission validation failures never enqueue") {
    TempDir dir;
    service::Service svc(test_config(dir));
    httplib::Client cli("127.0.0.1", svc.start());

    auto bad_graph = cli.Post("/api/v1/jobs", job_parts("0 x\n", R"({"invariants": ["deg"]})"));
    REQUIRE(bad_graph);
    CHECK(bad_graph->status == 400);

    auto bad_config = cli.Post("/api/v1/jobs", job_parts(kK3, "not json"));
    REQUIRE(bad_config);
    CHECK(bad_config->status == 400);

    auto missing_part = cli.Post(
        "/api/v1/jobs",
        httplib::MultipartFormDataItems{{"graph", kK3, "g.edges", "text/plain"}});
    REQUIRE(missing_part);
    CHECK(missing_part->status == 400);
}

TEST_CASE("oversized payloads are rejected with 413") {
    TempDir dir;
    service::ServiceConfig config = test_config(dir);
    config.max_payload_bytes = 16;
    service::Service svc(config);
    httplib::Client cli("127.0.0.1", svc.start());

    auto res = cli.Post("/api/v1/jobs",
                        job_parts("%n 4\n0 1\n1 2\n2 3\n", R"({"invariants": ["deg"]})"));
    REQUIRE(res);
    CHECK(res->status == 413);
}

TEST_CASE("duplicate payloads get distinct ids and queued jobs report conflicts") {
    TempDir dir;
    service::Service svc(test_config(dir));
    httplib::Client cli("127.0.0.1", svc.start());

    // a moderately heavy first job keeps the single worker busy
    std::ostringstream heavy;
    io::write_edge_list(heavy, erdos_renyi_list(300, 0.3, 5150));
    const std::string heavy_id =
        submit_ok(cli, heavy.str(), R"({"invariants": ["nl3"], "eigs": 50})");

    const std::string id_a = submit_ok(cli, kK3, R"({"invariants": ["deg"]})");
    const std::string id_b = submit_ok(cli, kK3, R"({"invariants": ["deg"]})");
    CHECK(id_a != id_b);
    CHECK(id_a.substr(0, 12) == id_b.substr(0, 12)); // same content hash prefix

    auto status = cli.Get("/api/v1/jobs/" + id_b);
    REQUIRE(status);
    const std::string state = nlohmann::json::parse(status->body).at("state");
    CHECK(state == "queued"); // FIFO with one worker: the heavy job runs first

    auto early = cli.Get("/api/v1/jobs/" + id_b + "/result");
    REQUIRE(early);
    CHECK(early->status == 409);

    CHECK(svc.wait(heavy_id).state == service::JobState::Done);
    CHECK(svc.wait(id_a).state == service::JobState::Done);
    CHECK(svc.wait(id_b).state == service::JobState::Done);
}

TEST_CASE("runtime failures surface as failed jobs with conflict results") {
    TempDir dir;
    service::Service svc(test_config(dir));
    httplib::Client cli("127.0.0.1", svc.start());

    const std::string id =
        submit_ok(cli, kK3, R"({"invariants": ["nl3"], "eigs": 1, "max_iter": 1, "tol": 1e-300})");
    service::JobRecord record = svc.wait(id);
    CHECK(record.state == service::JobState::Failed);
    CHECK_FALSE(record.error.empty());

    auto status = cli.Get("/api/v1/jobs/" + id);
    auto view = nlohmann::json::parse(status->body);
    CHECK(view.at("state") == "failed");
    CHECK_FALSE(view.at("error").get<std::string>().empty());

    auto result = cli.Get("/api/v1/jobs/" + id + "/result");
    REQUIRE(result);
    CHECK(result->status == 409);
    CHECK(nlohmann::json::parse(result->body).contains("error"));
}

TEST_CASE("unknown job ids yield 404") {
    TempDir dir;
    service::Service svc(test_config(dir));
    httplib::Client cli("127.0.0.1", svc.start());

    CHECK(cli.Get("/api/v1/jobs/nope-0")->status == 404);
    CHECK(cli.Get("/api/v1/jobs/nope-0/result")->status == 404);
}

TEST_CASE("synchronous conversion endpoint") {
    TempDir dir;
    service::Service svc(test_config(dir));
    httplib::Client cli("127.0.0.1", svc.start());

    std::ostringstream csv_out;
    io::write_vector_csv(csv_out, "value", std::vector<double>{1.0, 2.5});
    const std::string csv = csv_out.str();

    auto to_glcv = cli.Post("/api/v1/convert?from=csv&to=glcv", csv, "text/csv");
    REQUIRE(to_glcv);
    REQUIRE(to_glcv->status == 200);
    auto back = cli.Post("/api/v1/convert?from=glcv&to=csv", to_glcv->body,
                         "application/octet-stream");
    REQUIRE(back);
    REQUIRE(back->status == 200);
    CHECK(back->body == csv);

    auto unsupported = cli.Post("/api/v1/convert?from=csv&to=edgelist", csv, "text/csv");
    REQUIRE(unsupported);
    CHECK(unsupported->status == 400);
    auto missing = cli.Post("/api/v1/convert", csv, "text/csv");
    REQUIRE(missing);
    CHECK(missing->status == 400);
}

TEST_CASE("jobs persist across service restarts") {
    TempDir dir;
    std::string id;
    {
        service::Service svc(test_config(dir));
        httplib::Client cli("127.0.0.1", svc.start());
        id = submit_ok(cli, kK3, R"({"invariants": ["deg"]})");
        CHECK(svc.wait(id).state == service::JobState::Done);
        svc.stop();
    }
    {
        service::Service svc(test_config(dir));
        httplib::Client cli("127.0.0.1", svc.start());
        auto status = cli.Get("/api/v1/jobs/" + id);
        REQUIRE(status);
        REQUIRE(status->status == 200);
        CHECK(nlohmann::json::parse(status->body).at("state") == "done");

        auto result = cli.Get("/api/v1/jobs/" + id + "/result");
        REQUIRE(result);
        CHECK(result->status == 200);

        const std::string next = submit_ok(cli, kK3, R"({"invariants": ["deg"]})");
        CHECK(next != id);
        CHECK(svc.wait(next).state == service::JobState::Done);
    }
}
