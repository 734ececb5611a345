#include "advgen/gateway/mock_backend.hpp"

#include <algorithm>
#include <cmath>

#include "advgen/core/error.hpp"
#include "advgen/lm/tokenizer.hpp"
#include "httplib.h"

namespace advgen::gateway {

MockBackend::MockBackend() : server_(std::make_unique<httplib::Server>()) {
    server_->Post("/v1/complete", [this](const httplib::Request& req, httplib::Response& res) {
        std::size_t index = 0;
        Behaviour b;
        json request;
        try {
            request = json::parse(req.body);
        } catch (const json::parse_error&) {
            res.status = 400;
            return;
        }
        {
            std::lock_guard lock(mu_);
            index = requests_.size();
            requests_.push_back(request);
            auth_.push_back(req.get_header_value("Authorization"));
            b = behaviour_;
        }
        if (index < b.stall_first) std::this_thread::sleep_for(b.stall);
        if (index < b.error_first) {
            res.status = 503;
            res.set_content(R"({"error":"unavailable"})", "application/json");
            return;
        }
        int status = b.status;
        const auto body = respond(request, status);
        res.status = status;
        res.set_content(body, "application/json");
    });
    port_ = server_->bind_to_any_port("127.0.0.1");
    if (port_ <= 0) fail(ErrorCode::io, "mock backend could not bind a port");
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
}

MockBackend::~MockBackend() { stop(); }

void MockBackend::stop() {
    if (thread_.joinable()) {
        server_->stop();
        thread_.join();
    }
}

void MockBackend::set_behaviour(Behaviour b) {
    std::lock_guard lock(mu_);
    behaviour_ = std::move(b);
    requests_.clear();
    auth_.clear();
}

std::string MockBackend::url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1/complete"; }

std::size_t MockBackend::request_count() const {
    std::lock_guard lock(mu_);
    return requests_.size();
}

std::vector<json> MockBackend::requests() const {
    std::lock_guard lock(mu_);
    return requests_;
}

std::vector<std::string> MockBackend::authorization_headers() const {
    std::lock_guard lock(mu_);
    return auth_;
}

std::string MockBackend::respond(const json& request, int& status) {
    Behaviour b;
    {
        std::lock_guard lock(mu_);
        b = behaviour_;
    }
    if (b.malformed) return "{\"text\": ";
    const std::size_t n = request.value("logprobs_n", std::size_t{0});
    if (b.model == nullptr || n == 0) return json{{"text", b.completion}}.dump();

    const auto& vocab = b.model->vocabulary();
    const auto ctx = lm::tokenize(request.value("prompt", std::string()), vocab);
    const auto lps = b.model->next_token_logprobs(ctx.ids);
    std::vector<lm::TokenId> ids;
    for (lm::TokenId i = 0; i < lps.size(); ++i) {
        if (std::isfinite(lps[i])) ids.push_back(i);
    }
    std::stable_sort(ids.begin(), ids.end(), [&](auto x, auto y) { return lps[x] > lps[y]; });
    if (ids.size() > n) ids.resize(n);
    json step = json::object();
    for (auto id : ids) step[vocab.token(id)] = lps[id];
    status = 200;
    return json{{"text", ids.empty() ? std::string() : vocab.token(ids.front())},
                {"top_logprobs", json::array({step})}}
        .dump();
}

}  // namespace advgen::gateway
