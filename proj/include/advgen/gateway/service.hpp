#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "advgen/clf/classifier.hpp"
#include "advgen/core/io.hpp"
#include "advgen/core/journal.hpp"
#include "advgen/data/lexicon.hpp"
#include "advgen/data/record.hpp"
#include "advgen/gateway/remote.hpp"
#include "advgen/lm/language_model.hpp"
#include "advgen/prompt/generate.hpp"
#include "advgen/prompt/journal.hpp"
#include "advgen/prompt/pool.hpp"

namespace advgen::gateway {

/// Service config file. Relative paths resolve against the file's directory.
///
///   host, port                 listen address (default 127.0.0.1:8080)
///   pools_dir                  base demonstration pools (required)
///   journal                    append-only session journal (required)
///   lm                         n-gram model file, or
///   remote                     RemoteConfig plus "vocabulary" (word list)
///   classifier                 linear classifier file (needed for alice)
///   profanity_lexicon          word list for the implicit flag
///   auth_token_env             env var holding a bearer token clients must send
///   generation                 default GenerationConfig for sessions
///   max_candidates             cap on ?n= (default 50)
struct ServiceConfig {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::filesystem::path pools_dir;
    std::filesystem::path journal;
    std::optional<std::filesystem::path> lm;
    std::optional<RemoteConfig> remote;
    std::optional<std::filesystem::path> remote_vocabulary;
    std::optional<std::filesystem::path> classifier;
    std::optional<std::filesystem::path> profanity_lexicon;
    std::string auth_token_env;
    prompt::GenerationConfig generation;
    std::size_t max_candidates = 50;

    json to_json() const;
    static ServiceConfig from_json(const json& j, const std::filesystem::path& base_dir = {});
    static ServiceConfig load(const std::filesystem::path& path);
};

/// Immutable collaborators shared by every session and job.
struct ServiceModels {
    std::shared_ptr<const lm::LanguageModel> lm;
    std::shared_ptr<const clf::ToxicityClassifier> classifier;
    std::shared_ptr<const data::ProfanityLexicon> lexicon;

    static ServiceModels load(const ServiceConfig& config);
};

struct Candidate {
    std::string id;
    std::string text;
    std::optional<double> clf_score;
    std::optional<bool> implicit;
    data::GenerationMethod method = data::GenerationMethod::top_k;
    std::optional<prompt::Decision> decision;

    json to_json() const;  // {id, text, clf_score, implicit, method}
};

struct SessionState {
    std::string id;
    std::string group;
    Label label = Label::benign;
    std::string annotator;
    prompt::GenerationConfig generation;
    std::uint64_t seed = 0;
    std::uint64_t drawn = 0;  // candidate streams consumed so far
    std::vector<Candidate> candidates;

    std::size_t pending() const;
};

/// Curation sessions and batch jobs, independent of the HTTP layer.
///
/// Every state change is appended to the journal before it is applied in
/// memory; constructing a service over an existing journal replays it, so a
/// crashed process resumes with the same pools and sessions. Handlers raise
/// advgen::Error; GatewayServer maps codes to HTTP statuses.
class GatewayService {
public:
    GatewayService(ServiceConfig config, ServiceModels models);
    ~GatewayService();
    GatewayService(const GatewayService&) = delete;
    GatewayService& operator=(const GatewayService&) = delete;

    const ServiceConfig& config() const noexcept { return config_; }

    json create_session(const json& body);
    json session(const std::string& id) const;
    json next_candidates(const std::string& session_id, std::size_t n);
    json submit_decision(const std::string& session_id, const json& body);
    json pools() const;
    json pool(const std::string& group, const std::string& label) const;
    json submit_job(const json& body);
    json job(const std::string& id) const;

    /// Every pool, sorted, in the JSON written by DemonstrationPool::to_json.
    json pool_snapshot() const;
    json session_snapshot() const;

    /// Waits for running jobs.
    void drain();

private:
    struct Session {
        SessionState state;
        std::mutex mu;  // serializes candidate generation and decisions
    };
    struct Job {
        std::string id;
        std::atomic<int> status{0};  // 0 queued, 1 running, 2 done, 3 failed
        std::vector<data::GenerationRecord> records;
        std::string error;
        std::string error_code;
        std::thread worker;
    };

    using PoolKey = std::pair<std::string, Label>;

    void replay_journal();
    void apply(const json& entry);
    Session& find_session(const std::string& id) const;
    prompt::DemonstrationPool pool_copy(const PoolKey& key) const;
    json session_json(const SessionState& s) const;

    ServiceConfig config_;
    ServiceModels models_;
    std::unique_ptr<AppendLog> journal_;

    mutable std::mutex mu_;  // guards pools_, sessions_, jobs_ and the counters
    std::map<PoolKey, prompt::DemonstrationPool> pools_;
    std::map<std::string, std::unique_ptr<Session>> sessions_;
    std::map<std::string, std::unique_ptr<Job>> jobs_;
    std::uint64_t next_session_ = 1;
    std::uint64_t next_job_ = 1;
};

/// HTTP status for an error code; backend failures are 502.
int http_status(ErrorCode code) noexcept;

/// {error, code, retriable}
json error_body(const Error& e);

/// httplib front end for a GatewayService.
class GatewayServer {
public:
    /// Binds immediately; a taken port is an io error. Port 0 picks a free one.
    GatewayServer(GatewayService& service, const std::string& host, int port, std::string auth_token_env = {});
    ~GatewayServer();
    GatewayServer(const GatewayServer&) = delete;
    GatewayServer& operator=(const GatewayServer&) = delete;

    int port() const noexcept { return port_; }

    /// Serves on a background thread.
    void start();
    /// Serves on the calling thread until stop().
    void run();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    int port_ = 0;
};

}  // namespace advgen::gateway
