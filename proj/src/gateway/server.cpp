#include <sys/socket.h>

#include <cstdlib>
#include <thread>

#include <spdlog/spdlog.h>

#include "advgen/core/error.hpp"
#include "advgen/gateway/service.hpp"
#include "httplib.h"

namespace advgen::gateway {

struct GatewayServer::Impl {
    explicit Impl(GatewayService& s) : service(s) {}
    GatewayService& service;
    httplib::Server server;
    std::thread thread;
    std::string token;  // expected bearer token; empty disables the check
};

namespace {

void send(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

json parse_body(const httplib::Request& req) {
    if (req.body.empty()) return json::object();
    try {
        return json::parse(req.body);
    } catch (const json::parse_error&) {
        fail(ErrorCode::validation, "request body is not valid JSON");
    }
}

template <typename F>
httplib::Server::Handler guarded(F f) {
    return [f](const httplib::Request& req, httplib::Response& res) {
        try {
            f(req, res);
        } catch (const Error& e) {
            send(res, http_status(e.code()), error_body(e));
        } catch (const std::exception& e) {
            send(res, 500, {{"error", e.what()}, {"code", "E_INTERNAL"}, {"retriable", false}});
        }
    };
}

std::size_t parse_count(const httplib::Request& req) {
    if (!req.has_param("n")) return 1;
    const auto s = req.get_param_value("n");
    std::size_t n = 0;
    std::size_t used = 0;
    try {
        n = std::stoul(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size() || s.front() == '-') fail(ErrorCode::validation, "n must be a non-negative integer");
    return n;
}

}  // namespace

GatewayServer::GatewayServer(GatewayService& service, const std::string& host, int port, std::string auth_token_env)
    : impl_(std::make_unique<Impl>(service)) {
    if (!auth_token_env.empty()) {
        const char* t = std::getenv(auth_token_env.c_str());
        if (t == nullptr || *t == '\0') {
            fail(ErrorCode::configuration, "auth token env var " + auth_token_env + " is not set");
        }
        impl_->token = t;
    }
    auto& srv = impl_->server;
    auto& svc = impl_->service;

    srv.set_pre_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
        if (impl_->token.empty() || req.path == "/healthz") return httplib::Server::HandlerResponse::Unhandled;
        if (req.get_header_value("Authorization") == "Bearer " + impl_->token) {
            return httplib::Server::HandlerResponse::Unhandled;
        }
        send(res, 401, {{"error", "missing or wrong bearer token"}, {"code", "E_UNAUTHORIZED"}, {"retriable", false}});
        return httplib::Server::HandlerResponse::Handled;
    });
    srv.set_logger([](const httplib::Request& req, const httplib::Response& res) {
        spdlog::info("{} {} -> {}", req.method, req.path, res.status);
    });

    srv.Get("/healthz", [](const httplib::Request&, httplib::Response& res) { send(res, 200, {{"status", "ok"}}); });
    srv.Post("/sessions", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
                 send(res, 201, svc.create_session(parse_body(req)));
             }));
    srv.Get(R"(/sessions/([^/]+))", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
                send(res, 200, svc.session(req.matches[1]));
            }));
    srv.Post(R"(/sessions/([^/]+)/candidates)", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
                 send(res, 200, svc.next_candidates(req.matches[1], parse_count(req)));
             }));
    srv.Post(R"(/sessions/([^/]+)/decisions)", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
                 send(res, 200, svc.submit_decision(req.matches[1], parse_body(req)));
             }));
    srv.Get("/pools", guarded([&svc](const httplib::Request&, httplib::Response& res) { send(res, 200, svc.pools()); }));
    srv.Get(R"(/pools/([^/]+)/([^/]+))", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
                send(res, 200, svc.pool(req.matches[1], req.matches[2]));
            }));
    srv.Post("/generate", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
                 send(res, 202, svc.submit_job(parse_body(req)));
             }));
    srv.Get(R"(/jobs/([^/]+))", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
                send(res, 200, svc.job(req.matches[1]));
            }));

    // httplib's default adds SO_REUSEPORT, which would let a second server share a taken port.
    srv.set_socket_options([](socket_t sock) {
        int yes = 1;
        ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });
    if (port == 0) {
        port_ = srv.bind_to_any_port(host);
    } else if (srv.bind_to_port(host, port)) {
        port_ = port;
    }
    if (port_ <= 0) fail(ErrorCode::io, "cannot listen on " + host + ":" + std::to_string(port) + " (port in use?)");
}

GatewayServer::~GatewayServer() { stop(); }

void GatewayServer::start() {
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
}

void GatewayServer::run() { impl_->server.listen_after_bind(); }

void GatewayServer::stop() {
    impl_->server.stop();
    if (impl_->thread.joinable()) impl_->thread.join();
    impl_->service.drain();
}

}  // namespace advgen::gateway
