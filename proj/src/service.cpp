#include "glocal/service.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <sstream>

#include "httplib.h"
#include "json.hpp"

#include "glocal/tar.hpp"

namespace glocal {
namespace service {

namespace {

struct PayloadTooLarge : InputError {
    using InputError::InputError;
};

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

int state_rank(JobState s) {
    switch (s) {
    case JobState::Queued:
        return 0;
    case JobState::Running:
        return 1;
    case JobState::Done:
    case JobState::Failed:
        return 2;
    }
    return 2;
}

JobState state_from_string(const std::string& s) {
    if (s == "queued")
        return JobState::Queued;
    if (s == "running")
        return JobState::Running;
    if (s == "done")
        return JobState::Done;
    if (s == "failed")
        return JobState::Failed;
    throw InputError("unknown job state '" + s + "'");
}

void reply_json(httplib::Response& res, int status, const nlohmann::json& body) {
    res.status = status;
    res.set_content(body.dump(2) + "\n", "application/json");
}

void reply_error(httplib::Response& res, int status, const std::string& message) {
    reply_json(res, status, nlohmann::json{{"error", message}});
}

} // namespace

const char* to_string(JobState s) {
    switch (s) {
    case JobState::Queued:
        return "queued";
    case JobState::Running:
        return "running";
    case JobState::Done:
        return "done";
    case JobState::Failed:
        return "failed";
    }
    return "failed";
}

struct Service::Job {
    JobRecord record;
};

Service::Service(ServiceConfig config) : config_(std::move(config)) {}

Service::~Service() { stop(); }

std::string Service::job_dir(const std::string& id) const { return config_.data_dir + "/" + id; }

void Service::persist_locked(const Job& job) {
    const JobRecord& r = job.record;
    nlohmann::json doc;
    doc["id"] = r.id;
    doc["state"] = to_string(r.state);
    doc["submitted_at"] = r.submitted_at;
    doc["config"] = r.config_json;
    doc["input_format"] =
        r.input_format == io::GraphFormat::MatrixMarket ? "matrixmarket" : "edgelist";
    if (!r.error.empty())
        doc["error"] = r.error;
    if (!r.result_files.empty())
        doc["result_files"] = r.result_files;
    io::write_file_atomic(job_dir(r.id) + "/record.json", doc.dump(2) + "\n");
}

void Service::recover_existing_jobs() {
    namespace fs = std::filesystem;
    fs::create_directories(config_.data_dir);
    for (const auto& entry : fs::directory_iterator(config_.data_dir)) {
        if (!entry.is_directory())
            continue;
        const fs::path record_path = entry.path() / "record.json";
        if (!fs::exists(record_path))
            continue;
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(io::read_file(record_path.string()));
        } catch (const std::exception&) {
            continue;
        }
        auto job = std::make_unique<Job>();
        JobRecord& r = job->record;
        try {
            r.id = doc.at("id").get<std::string>();
            r.state = state_from_string(doc.at("state").get<std::string>());
            r.submitted_at = doc.at("submitted_at").get<std::string>();
            r.config_json = doc.at("config").get<std::string>();
            r.input_format = doc.at("input_format").get<std::string>() == "matrixmarket"
                                 ? io::GraphFormat::MatrixMarket
                                 : io::GraphFormat::EdgeList;
            if (doc.contains("error"))
                r.error = doc.at("error").get<std::string>();
            if (doc.contains("result_files"))
                r.result_files = doc.at("result_files").get<std::vector<std::string>>();
        } catch (const std::exception&) {
            continue;
        }
        auto dash = r.id.find_last_of('-');
        if (dash != std::string::npos) {
            const std::uint64_t seq = std::strtoull(r.id.c_str() + dash + 1, nullptr, 10);
            next_seq_ = std::max(next_seq_, seq + 1);
        }
        if (r.state == JobState::Running) {
            // a previous process died mid-run; running -> failed is a legal move
            r.state = JobState::Failed;
            r.error = "interrupted by service restart";
            persist_locked(*job);
        }
        if (r.state == JobState::Queued)
            queue_.push_back(r.id);
        jobs_[r.id] = std::move(job);
    }
}

std::string Service::submit(const std::string& graph_bytes, const std::string& filename,
                            const std::string& config_json) {
    if (graph_bytes.size() > config_.max_payload_bytes)
        throw PayloadTooLarge("graph payload exceeds limit of " +
                              std::to_string(config_.max_payload_bytes) + " bytes");
    pipeline::RunConfig cfg = pipeline::config_from_json(config_json);
    const io::GraphFormat format =
        cfg.input_format ? *cfg.input_format : io::detect_graph_format(filename);
    // reject malformed graphs before they reach the queue
    pipeline::graph_from_bytes(graph_bytes, format, cfg.threshold);

    std::lock_guard<std::mutex> lock(mu_);
    char hash[17];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(graph_bytes)));
    const std::string id = std::string(hash, 12) + "-" + std::to_string(next_seq_++);

    auto job = std::make_unique<Job>();
    job->record.id = id;
    job->record.state = JobState::Queued;
    job->record.submitted_at = utc_now();
    job->record.config_json = config_json;
    job->record.input_format = format;

    std::filesystem::create_directories(job_dir(id));
    io::write_file_atomic(job_dir(id) + "/input", graph_bytes);
    persist_locked(*job);
    jobs_[id] = std::move(job);
    queue_.push_back(id);
    cv_.notify_one();
    return id;
}

JobRecord Service::status(const std::string& id) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = jobs_.find(id);
    if (it == jobs_.end())
        throw InputError("unknown job id '" + id + "'");
    return it->second->record;
}

JobRecord Service::wait(const std::string& id) {
    std::unique_lock<std::mutex> lock(mu_);
    auto it = jobs_.find(id);
    if (it == jobs_.end())
        throw InputError("unknown job id '" + id + "'");
    done_cv_.wait(lock, [&] {
        return stopping_ || state_rank(jobs_.at(id)->record.state) == 2;
    });
    return jobs_.at(id)->record;
}

void Service::set_state(const std::string& id, JobState next, const std::string& error,
                        std::vector<std::string> result_files) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = jobs_.find(id);
    if (it == jobs_.end())
        return;
    JobRecord& r = it->second->record;
    if (state_rank(next) <= state_rank(r.state))
        throw NumericError("job state may only move forward: " + std::string(to_string(r.state)) +
                           " -> " + to_string(next));
    r.state = next;
    r.error = error;
    r.result_files = std::move(result_files);
    persist_locked(*it->second);
    if (state_rank(next) == 2)
        done_cv_.notify_all();
}

void Service::worker_loop() {
    while (true) {
        std::string id;
        {
            std::unique_lock<std::mutex> lock(mu_);
            cv_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
            if (stopping_)
                return;
            id = queue_.front();
            queue_.pop_front();
        }
        set_state(id, JobState::Running, "", {});
        std::string config_json;
        io::GraphFormat format = io::GraphFormat::EdgeList;
        {
            std::lock_guard<std::mutex> lock(mu_);
            const JobRecord& r = jobs_.at(id)->record;
            config_json = r.config_json;
            format = r.input_format;
        }
        try {
            pipeline::RunConfig cfg = pipeline::config_from_json(config_json);
            SparseGraph g = pipeline::graph_from_bytes(io::read_file(job_dir(id) + "/input"),
                                                       format, cfg.threshold);
            pipeline::ComputeResult result = pipeline::run_compute_on(g, cfg);
            std::vector<std::string> files =
                pipeline::write_outputs(job_dir(id) + "/result", cfg, result);
            set_state(id, JobState::Done, "", std::move(files));
        } catch (const std::exception& e) {
            set_state(id, JobState::Failed, e.what(), {});
        }
    }
}

void Service::setup_routes() {
    httplib::Server& svr = *server_;
    svr.set_payload_max_length(config_.max_payload_bytes + (1 << 20));

    svr.Post("/api/v1/jobs", [this](const httplib::Request& req, httplib::Response& res) {
        if (!req.has_file("graph") || !req.has_file("config")) {
            reply_error(res, 400, "multipart parts 'graph' and 'config' are required");
            return;
        }
        const auto graph = req.get_file_value("graph");
        const auto config = req.get_file_value("config");
        try {
            const std::string id = submit(graph.content, graph.filename, config.content);
            reply_json(res, 202, nlohmann::json{{"id", id}, {"state", "queued"}});
        } catch (const PayloadTooLarge& e) {
            reply_error(res, 413, e.what());
        } catch (const InputError& e) {
            reply_error(res, 400, e.what());
        }
    });

    svr.Get(R"(/api/v1/jobs/([^/]+))", [this](const httplib::Request& req,
                                              httplib::Response& res) {
        const std::string id = req.matches[1];
        JobRecord r;
        try {
            r = status(id);
        } catch (const InputError& e) {
            reply_error(res, 404, e.what());
            return;
        }
        nlohmann::json doc{{"id", r.id},
                           {"state", to_string(r.state)},
                           {"submitted_at", r.submitted_at}};
        if (r.state == JobState::Failed)
            doc["error"] = r.error;
        if (r.state == JobState::Done) {
            doc["result_files"] = r.result_files;
            try {
                auto meta = nlohmann::json::parse(
                    io::read_file(job_dir(id) + "/result/metadata.json"));
                if (meta.contains("timings"))
                    doc["timings"] = meta["timings"];
            } catch (const std::exception&) {
                // result metadata unavailable; status stays useful without timings
            }
        }
        reply_json(res, 200, doc);
    });

    svr.Get(R"(/api/v1/jobs/([^/]+)/result)", [this](const httplib::Request& req,
                                                     httplib::Response& res) {
        const std::string id = req.matches[1];
        JobRecord r;
        try {
            r = status(id);
        } catch (const InputError& e) {
            reply_error(res, 404, e.what());
            return;
        }
        if (r.state == JobState::Failed) {
            reply_error(res, 409, r.error.empty() ? "job failed" : r.error);
            return;
        }
        if (r.state != JobState::Done) {
            reply_error(res, 409,
                        "job not finished (state=" + std::string(to_string(r.state)) + ")");
            return;
        }
        std::vector<tar::Entry> entries;
        entries.reserve(r.result_files.size());
        try {
            for (const std::string& name : r.result_files)
                entries.push_back({name, io::read_file(job_dir(id) + "/result/" + name)});
        } catch (const InputError& e) {
            reply_error(res, 500, e.what());
            return;
        }
        res.status = 200;
        res.set_content(tar::write_archive(entries), "application/x-tar");
    });

    svr.Post("/api/v1/convert", [](const httplib::Request& req, httplib::Response& res) {
        if (!req.has_param("from") || !req.has_param("to")) {
            reply_error(res, 400, "query parameters 'from' and 'to' are required");
            return;
        }
        try {
            const auto from = pipeline::parse_file_kind(req.get_param_value("from"));
            const auto to = pipeline::parse_file_kind(req.get_param_value("to"));
            const std::string out = pipeline::convert_bytes(req.body, from, to);
            res.status = 200;
            res.set_content(out, to == pipeline::FileKind::GlcvVector
                                     ? "application/octet-stream"
                                     : "text/plain");
        } catch (const InputError& e) {
            reply_error(res, 400, e.what());
        }
    });
}

int Service::start() {
    server_ = std::make_unique<httplib::Server>();
    {
        std::lock_guard<std::mutex> lock(mu_);
        recover_existing_jobs();
    }
    setup_routes();

    int workers = config_.workers;
    if (workers <= 0)
        workers = std::max(1u, std::thread::hardware_concurrency());
    stopping_ = false;
    for (int i = 0; i < workers; ++i)
        workers_.emplace_back([this] { worker_loop(); });

    if (config_.listen_port == 0) {
        port_ = server_->bind_to_any_port(config_.listen_host);
        if (port_ <= 0)
            throw InputError("cannot bind to an ephemeral port on " + config_.listen_host);
    } else {
        if (!server_->bind_to_port(config_.listen_host, config_.listen_port))
            throw InputError("cannot bind to " + config_.listen_host + ":" +
                             std::to_string(config_.listen_port));
        port_ = config_.listen_port;
    }
    listen_thread_ = std::thread([this] { server_->listen_after_bind(); });
    for (int i = 0; i < 5000 && !server_->is_running(); ++i)
        std::this_thread::sleep_for(std::chrono::milliseconds(1));
    if (!server_->is_running())
        throw InputError("server failed to start listening");
    return port_;
}

void Service::stop() {
    {
        std::lock_guard<std::mutex> lock(mu_);
        if (stopping_ && workers_.empty() && !listen_thread_.joinable())
            return;
        stopping_ = true;
    }
    cv_.notify_all();
    done_cv_.notify_all();
    for (auto& w : workers_)
        w.join();
    workers_.clear();
    if (server_)
        server_->stop();
    if (listen_thread_.joinable())
        listen_thread_.join();
}

} // namespace service
} // namespace glocal
