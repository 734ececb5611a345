#include "advgen/gateway/remote.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

#include <spdlog/spdlog.h>

#include "advgen/core/error.hpp"
#include "advgen/lm/tokenizer.hpp"
#include "httplib.h"

namespace advgen::gateway {

void RemoteConfig::validate() const {
    const bool http = url.rfind("http://", 0) == 0 || url.rfind("https://", 0) == 0;
    if (!http) fail(ErrorCode::configuration, "remote url must start with http:// or https://");
    if (retries < 1) fail(ErrorCode::configuration, "remote retries must be at least 1");
    if (logprobs_n < 1) fail(ErrorCode::configuration, "remote logprobs_n must be at least 1");
    if (timeout.count() <= 0) fail(ErrorCode::configuration, "remote timeout must be positive");
}

json RemoteConfig::to_json() const {
    return {{"url", url},
            {"token_env", token_env},
            {"timeout_ms", timeout.count()},
            {"retries", retries},
            {"logprobs_n", logprobs_n}};
}

RemoteConfig RemoteConfig::from_json(const json& j) {
    try {
        RemoteConfig c;
        c.url = j.at("url").get<std::string>();
        c.token_env = j.value("token_env", std::string());
        c.timeout = std::chrono::milliseconds(j.value("timeout_ms", c.timeout.count()));
        c.retries = j.value("retries", c.retries);
        c.logprobs_n = j.value("logprobs_n", c.logprobs_n);
        c.validate();
        return c;
    } catch (const json::exception& e) {
        fail(ErrorCode::configuration, std::string("bad remote config: ") + e.what());
    }
}

RemoteClient::RemoteClient(RemoteConfig config) : config_(std::move(config)) {
    config_.validate();
    const auto scheme_end = config_.url.find("://") + 3;
    const auto path_start = config_.url.find('/', scheme_end);
    scheme_host_port_ = config_.url.substr(0, path_start);
    path_ = path_start == std::string::npos ? "/" : config_.url.substr(path_start);
}

Completion RemoteClient::parse_response(const std::string& body, bool want_logprobs) {
    json j;
    try {
        j = json::parse(body);
    } catch (const json::parse_error&) {
        fail(ErrorCode::protocol, "backend response is not JSON");
    }
    if (!j.is_object()) fail(ErrorCode::protocol, "backend response is not a JSON object");
    Completion c;
    if (j.contains("text")) {
        if (!j.at("text").is_string()) fail(ErrorCode::protocol, "backend \"text\" is not a string");
        c.text = j.at("text").get<std::string>();
    } else if (!want_logprobs) {
        fail(ErrorCode::protocol, "backend response lacks \"text\"");
    }
    if (want_logprobs) {
        if (!j.contains("top_logprobs") || !j.at("top_logprobs").is_array()) {
            fail(ErrorCode::protocol, "backend response lacks \"top_logprobs\"");
        }
        for (const auto& step : j.at("top_logprobs")) {
            if (!step.is_object()) fail(ErrorCode::protocol, "top_logprobs entries must be objects");
            std::map<std::string, double> m;
            for (const auto& [tok, lp] : step.items()) {
                if (!lp.is_number()) fail(ErrorCode::protocol, "logprob for a token is not a number");
                const double v = lp.get<double>();
                if (std::isnan(v) || v > 1e-9) fail(ErrorCode::protocol, "logprob out of range");
                m[tok] = v;
            }
            c.top_logprobs.push_back(std::move(m));
        }
    }
    return c;
}

Completion RemoteClient::complete(const std::string& prompt, const CompletionParams& params) const {
    const std::size_t n = std::min(params.logprobs_n, config_.logprobs_n);
    const json request{{"prompt", prompt},
                       {"max_tokens", params.max_tokens},
                       {"temperature", params.temperature},
                       {"top_k", params.top_k},
                       {"logprobs_n", n}};
    httplib::Headers headers;
    if (!config_.token_env.empty()) {
        if (const char* token = std::getenv(config_.token_env.c_str()); token != nullptr && *token != '\0') {
            headers.emplace("Authorization", std::string("Bearer ") + token);
        }
    }

    std::string last_problem;
    for (std::size_t attempt = 1; attempt <= config_.retries; ++attempt) {
        httplib::Client client(scheme_host_port_);
        const auto secs = config_.timeout.count() / 1000;
        const auto usecs = (config_.timeout.count() % 1000) * 1000;
        client.set_connection_timeout(secs, usecs);
        client.set_read_timeout(secs, usecs);
        client.set_write_timeout(secs, usecs);
        auto res = client.Post(path_, headers, request.dump(), "application/json");
        if (!res) {
            last_problem = "transport error: " + httplib::to_string(res.error());
        } else if (res->status >= 500) {
            last_problem = "HTTP " + std::to_string(res->status);
        } else if (res->status != 200) {
            fail(ErrorCode::backend, "backend " + scheme_host_port_ + path_ + " answered HTTP " +
                                         std::to_string(res->status));
        } else {
            return parse_response(res->body, n > 0);
        }
        spdlog::warn("backend attempt {}/{} failed: {}", attempt, config_.retries, last_problem);
    }
    fail(ErrorCode::backend, "backend " + scheme_host_port_ + path_ + " failed after " +
                                 std::to_string(config_.retries) + " attempts (" + last_problem + ")");
}

RemoteLanguageModel::RemoteLanguageModel(RemoteClient client, lm::Vocabulary vocab)
    : client_(std::move(client)), vocab_(std::move(vocab)) {}

std::vector<double> RemoteLanguageModel::next_token_logprobs(std::span<const lm::TokenId> context) const {
    CompletionParams p;
    p.max_tokens = 1;
    p.logprobs_n = client_.config().logprobs_n;
    const auto c = client_.complete(lm::detokenize(context, vocab_), p);
    if (c.top_logprobs.empty()) fail(ErrorCode::protocol, "backend returned no logprob step");

    std::vector<double> out(vocab_.size(), -std::numeric_limits<double>::infinity());
    for (const auto& [raw, lp] : c.top_logprobs.front()) {
        std::string tok = raw;
        if (tok != "\n") {
            const auto b = tok.find_first_not_of(" \t");
            const auto e = tok.find_last_not_of(" \t");
            tok = b == std::string::npos ? std::string() : tok.substr(b, e - b + 1);
            std::transform(tok.begin(), tok.end(), tok.begin(), [](unsigned char ch) { return std::tolower(ch); });
        }
        const auto id = vocab_.find(tok);
        if (!id || *id == lm::Vocabulary::kBosId || *id == lm::Vocabulary::kUnkId) continue;
        // Case variants can map to one token; keep the larger mass.
        out[*id] = std::max(out[*id], lp);
    }
    return out;
}

lm::Vocabulary read_vocabulary(const std::filesystem::path& path) {
    lm::Vocabulary v;
    for (const auto& line : read_lines(path)) {
        if (!line.empty()) v.add(line);
    }
    return v;
}

}  // namespace advgen::gateway
