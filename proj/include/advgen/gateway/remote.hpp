#pragma once

#include <chrono>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "advgen/core/io.hpp"
#include "advgen/lm/language_model.hpp"
#include "advgen/lm/vocabulary.hpp"

namespace advgen::gateway {

struct RemoteConfig {
    std::string url;                  // http://host:port/path
    std::string token_env;            // name of the env var holding the bearer token; empty for none
    std::chrono::milliseconds timeout{5000};
    std::size_t retries = 3;          // total tries for timeouts, connection errors and 5xx
    std::size_t logprobs_n = 100;     // widest top-n logprob list the remote returns

    void validate() const;
    json to_json() const;
    static RemoteConfig from_json(const json& j);
};

struct CompletionParams {
    std::size_t max_tokens = 30;
    double temperature = 0.9;
    std::size_t top_k = 0;       // 0: remote default
    std::size_t logprobs_n = 0;  // 0: completion text only
};

struct Completion {
    std::string text;
    std::vector<std::map<std::string, double>> top_logprobs;  // one map per generated step
};

/// JSON-over-HTTP completion client.
///
/// Request: POST {prompt, max_tokens, temperature, top_k, logprobs_n}.
/// Response: {"text": string} in plain mode, {"top_logprobs": [{token: logprob}, ...]}
/// when logprobs_n > 0 (text optional).
/// Timeouts, connection failures and 5xx responses are retried up to
/// `retries` tries in total, then E_BACKEND. Other statuses raise E_BACKEND
/// at once; an unparsable or mis-shaped body raises E_PROTOCOL. The token
/// never appears in errors or logs.
class RemoteClient {
public:
    explicit RemoteClient(RemoteConfig config);

    Completion complete(const std::string& prompt, const CompletionParams& params) const;
    const RemoteConfig& config() const noexcept { return config_; }

    /// Parses a response body; exposed for tests.
    static Completion parse_response(const std::string& body, bool want_logprobs);

private:
    RemoteConfig config_;
    std::string scheme_host_port_;
    std::string path_;
};

/// LanguageModel view of a remote backend. Each step sends the detokenized
/// context with max_tokens = 1 and maps the returned top-n tokens onto the
/// local vocabulary (lowercased, surrounding spaces trimmed); everything else
/// is -infinity, and the window clamps the decoder's top_v.
class RemoteLanguageModel final : public lm::LanguageModel {
public:
    RemoteLanguageModel(RemoteClient client, lm::Vocabulary vocab);

    const lm::Vocabulary& vocabulary() const override { return vocab_; }
    std::vector<double> next_token_logprobs(std::span<const lm::TokenId> context) const override;
    std::optional<std::size_t> logprob_window() const override { return client_.config().logprobs_n; }

private:
    RemoteClient client_;
    lm::Vocabulary vocab_;
};

/// One token per line; the reserved specials are always present.
lm::Vocabulary read_vocabulary(const std::filesystem::path& path);

}  // namespace advgen::gateway
