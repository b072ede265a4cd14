#include <csignal>
#include <cstdio>
#include <string>

#include "CLI11.hpp"

#include "glocal/service.hpp"

namespace {

// "host:port" -> (host, port); a bare "host" keeps the default port
void split_listen(const std::string& listen, std::string& host, int& port) {
    const auto colon = listen.find_last_of(':');
    if (colon == std::string::npos) {
        host = listen;
        return;
    }
    host = listen.substr(0, colon);
    port = std::stoi(listen.substr(colon + 1));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"glocal-serve: batch invariant jobs over HTTP"};

    std::string listen = "127.0.0.1:8080";
    glocal::service::ServiceConfig config;
    app.add_option("--listen", listen, "host:port to bind (port 0 picks one)")
        ->envname("GLOCAL_LISTEN");
    app.add_option("--data-dir", config.data_dir, "job and result storage directory")
        ->envname("GLOCAL_DATA_DIR");
    app.add_option("--workers", config.workers, "worker threads (0: all cores)")
        ->envname("GLOCAL_WORKERS");
    app.add_option("--max-payload-bytes", config.max_payload_bytes,
                   "largest accepted graph upload")
        ->envname("GLOCAL_MAX_PAYLOAD_BYTES");

    try {
        app.parse(argc, argv);
        split_listen(listen, config.listen_host, config.listen_port);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: bad --listen value: %s\n", e.what());
        return 1;
    }

    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    try {
        glocal::service::Service service(config);
        const int port = service.start();
        std::printf("listening on %s:%d, data dir '%s'\n", config.listen_host.c_str(), port,
                    config.data_dir.c_str());
        std::fflush(stdout);
        int sig = 0;
        sigwait(&signals, &sig);
        std::printf("received signal %d, shutting down\n", sig);
        service.stop();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
