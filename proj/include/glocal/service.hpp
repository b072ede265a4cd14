#pragma once

#include <condition_variable>
#include <cstddef>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "glocal/io.hpp"
#include "glocal/pipeline.hpp"

namespace httplib {
class Server;
}

namespace glocal {
namespace service {

struct ServiceConfig {
    std::string listen_host = "127.0.0.1";
    int listen_port = 8080;
    std::string data_dir = "glocal-data";
    int workers = 0; // 0: number of hardware threads
    std::size_t max_payload_bytes = 256ull << 20;
};

enum class JobState { Queued, Running, Done, Failed };

const char* to_string(JobState s);

struct JobRecord {
    std::string id;
    JobState state = JobState::Queued;
    std::string submitted_at; // UTC, ISO-8601
    std::string config_json;  // document as submitted
    io::GraphFormat input_format = io::GraphFormat::EdgeList;
    std::string error;                     // set when failed
    std::vector<std::string> result_files; // set when done
};

/// Batch-job front end over the compute pipeline. Jobs are persisted under
/// data_dir/<id>/ (input bytes, record.json, result files) and executed by a
/// FIFO queue drained by a bounded worker pool.
class Service {
public:
    explicit Service(ServiceConfig config);
    ~Service();

    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Binds to config.listen_port (or an ephemeral port when it is 0),
    /// starts the workers and serves requests on a background thread.
    /// Returns the bound port.
    int start();
    void stop();

    int port() const { return port_; }

    /// Direct submission path, also used by the HTTP handler: validates,
    /// persists and enqueues. Returns the new job id.
    std::string submit(const std::string& graph_bytes, const std::string& filename,
                       const std::string& config_json);

    JobRecord status(const std::string& id) const;

    /// Blocks until the job leaves the queued/running states.
    JobRecord wait(const std::string& id);

private:
    struct Job;

    void setup_routes();
    void worker_loop();
    void persist_locked(const Job& job);
    void set_state(const std::string& id, JobState next, const std::string& error,
                   std::vector<std::string> result_files);
    void recover_existing_jobs();
    std::string job_dir(const std::string& id) const;

    ServiceConfig config_;
    std::unique_ptr<httplib::Server> server_;
    std::thread listen_thread_;
    int port_ = 0;

    mutable std::mutex mu_;
    std::condition_variable cv_;
    std::condition_variable done_cv_;
    std::map<std::string, std::unique_ptr<Job>> jobs_;
    std::deque<std::string> queue_;
    std::uint64_t next_seq_ = 0;
    bool stopping_ = false;
    std::vector<std::thread> workers_;
};

} // namespace service
} // namespace glocal
