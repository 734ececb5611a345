#pragma once

#include <chrono>
#include <cstddef>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "advgen/core/io.hpp"
#include "advgen/lm/language_model.hpp"

namespace httplib {
class Server;
}

namespace advgen::gateway {

/// In-process completion server speaking the RemoteClient wire format, for
/// tests and offline demos. Binds 127.0.0.1 on an ephemeral port.
class MockBackend {
public:
    struct Behaviour {
        std::string completion = "a fixed completion";
        const lm::LanguageModel* model = nullptr;  // serves top-n logprobs when set
        std::size_t stall_first = 0;                // these requests sleep `stall` before answering
        std::chrono::milliseconds stall{0};
        std::size_t error_first = 0;                // these requests get HTTP 503
        int status = 200;                           // status for the rest
        bool malformed = false;                     // answer with a non-JSON body
    };

    MockBackend();
    ~MockBackend();
    MockBackend(const MockBackend&) = delete;
    MockBackend& operator=(const MockBackend&) = delete;

    void set_behaviour(Behaviour b);
    int port() const noexcept { return port_; }
    std::string url() const;  // http://127.0.0.1:<port>/v1/complete

    std::size_t request_count() const;
    std::vector<json> requests() const;
    std::vector<std::string> authorization_headers() const;
    void stop();

private:
    std::string respond(const json& request, int& status);

    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
    int port_ = 0;
    mutable std::mutex mu_;
    Behaviour behaviour_;
    std::vector<json> requests_;
    std::vector<std::string> auth_;
};

}  // namespace advgen::gateway
