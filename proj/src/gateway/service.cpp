#include "advgen/gateway/service.hpp"

#include <algorithm>

#include <spdlog/spdlog.h>

#include "advgen/core/error.hpp"
#include "advgen/lm/ngram_model.hpp"

namespace advgen::gateway {

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() || base.empty() ? path : base / path;
}

std::optional<std::filesystem::path> optional_path(const json& j, const char* key,
                                                   const std::filesystem::path& base) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return resolve(base, j.at(key).get<std::string>());
}

const char* job_status_name(int s) {
    switch (s) {
        case 0: return "queued";
        case 1: return "running";
        case 2: return "done";
        default: return "failed";
    }
}

json pool_summary(const prompt::DemonstrationPool& p) {
    const auto accepted = static_cast<std::size_t>(
        std::count(p.provenance().begin(), p.provenance().end(), prompt::Provenance::human_accepted));
    return {{"group", p.group()},
            {"label", label_name(p.label())},
            {"size", p.size()},
            {"seed", p.size() - accepted},
            {"accepted", accepted},
            {"in_band", !p.size_warning()}};
}

}  // namespace

json ServiceConfig::to_json() const {
    json j{{"host", host},
           {"port", port},
           {"pools_dir", pools_dir.string()},
           {"journal", journal.string()},
           {"auth_token_env", auth_token_env},
           {"generation", generation.to_json()},
           {"max_candidates", max_candidates}};
    if (lm) j["lm"] = lm->string();
    if (remote) {
        j["remote"] = remote->to_json();
        if (remote_vocabulary) j["remote"]["vocabulary"] = remote_vocabulary->string();
    }
    if (classifier) j["classifier"] = classifier->string();
    if (profanity_lexicon) j["profanity_lexicon"] = profanity_lexicon->string();
    return j;
}

ServiceConfig ServiceConfig::from_json(const json& j, const std::filesystem::path& base_dir) {
    ServiceConfig c;
    try {
        c.host = j.value("host", c.host);
        c.port = j.value("port", c.port);
        c.pools_dir = resolve(base_dir, j.at("pools_dir").get<std::string>());
        c.journal = resolve(base_dir, j.at("journal").get<std::string>());
        c.lm = optional_path(j, "lm", base_dir);
        if (j.contains("remote") && !j.at("remote").is_null()) {
            c.remote = RemoteConfig::from_json(j.at("remote"));
            c.remote_vocabulary = optional_path(j.at("remote"), "vocabulary", base_dir);
            if (!c.remote_vocabulary) fail(ErrorCode::configuration, "remote backend needs a \"vocabulary\" file");
        }
        c.classifier = optional_path(j, "classifier", base_dir);
        c.profanity_lexicon = optional_path(j, "profanity_lexicon", base_dir);
        c.auth_token_env = j.value("auth_token_env", std::string());
        if (j.contains("generation")) c.generation = prompt::GenerationConfig::from_json(j.at("generation"));
        c.max_candidates = j.value("max_candidates", c.max_candidates);
    } catch (const json::exception& e) {
        fail(ErrorCode::configuration, std::string("bad service config: ") + e.what());
    }
    if (c.lm.has_value() == c.remote.has_value()) {
        fail(ErrorCode::configuration, "service config needs exactly one of \"lm\" and \"remote\"");
    }
    if (c.port < 0 || c.port > 65535) fail(ErrorCode::configuration, "port out of range");
    if (c.max_candidates == 0) fail(ErrorCode::configuration, "max_candidates must be positive");
    return c;
}

ServiceConfig ServiceConfig::load(const std::filesystem::path& path) {
    return from_json(read_json(path), path.parent_path());
}

ServiceModels ServiceModels::load(const ServiceConfig& config) {
    ServiceModels m;
    if (config.lm) {
        m.lm = std::make_shared<lm::NGramModel>(lm::NGramModel::load(*config.lm));
    } else {
        m.lm = std::make_shared<RemoteLanguageModel>(RemoteClient(*config.remote),
                                                     read_vocabulary(*config.remote_vocabulary));
    }
    if (config.classifier) {
        m.classifier = std::make_shared<clf::LinearClassifier>(clf::LinearClassifier::load(*config.classifier));
    }
    if (config.profanity_lexicon) {
        m.lexicon = std::make_shared<data::ProfanityLexicon>(data::ProfanityLexicon::load(*config.profanity_lexicon));
    }
    return m;
}

json Candidate::to_json() const {
    json j{{"id", id},
           {"text", text},
           {"clf_score", clf_score ? json(*clf_score) : json(nullptr)},
           {"implicit", implicit ? json(*implicit) : json(nullptr)},
           {"method", data::method_name(method)}};
    if (decision) j["decision"] = prompt::decision_name(*decision);
    return j;
}

namespace {

Candidate candidate_from_json(const json& j) {
    Candidate c;
    c.id = j.at("id").get<std::string>();
    c.text = j.at("text").get<std::string>();
    if (!j.at("clf_score").is_null()) c.clf_score = j.at("clf_score").get<double>();
    if (!j.at("implicit").is_null()) c.implicit = j.at("implicit").get<bool>();
    c.method = data::parse_method(j.at("method").get<std::string>());
    return c;
}

}  // namespace

std::size_t SessionState::pending() const {
    return static_cast<std::size_t>(
        std::count_if(candidates.begin(), candidates.end(), [](const Candidate& c) { return !c.decision; }));
}

GatewayService::GatewayService(ServiceConfig config, ServiceModels models)
    : config_(std::move(config)), models_(std::move(models)) {
    if (!models_.lm) fail(ErrorCode::configuration, "gateway needs a language model");
    for (auto& p : prompt::load_pools(config_.pools_dir)) {
        PoolKey key{p.group(), p.label()};
        pools_.emplace(std::move(key), std::move(p));
    }
    if (pools_.empty()) spdlog::warn("no demonstration pools found in {}", config_.pools_dir.string());
    replay_journal();
    journal_ = std::make_unique<AppendLog>(config_.journal);
}

GatewayService::~GatewayService() { drain(); }

void GatewayService::drain() {
    std::vector<Job*> running;
    {
        std::lock_guard lock(mu_);
        for (auto& [id, job] : jobs_) running.push_back(job.get());
    }
    for (auto* job : running) {
        if (job->worker.joinable()) job->worker.join();
    }
}

void GatewayService::replay_journal() {
    const auto contents = AppendLog::read(config_.journal);
    if (contents.torn_tail) spdlog::warn("journal {} had a torn final line; it was skipped", config_.journal.string());
    for (const auto& entry : contents.entries) apply(entry);
    if (!contents.entries.empty()) {
        spdlog::info("replayed {} journal entries ({} sessions)", contents.entries.size(), sessions_.size());
    }
}

// Applies one journal entry to the in-memory state. Callers hold the needed locks.
void GatewayService::apply(const json& entry) {
    const auto type = entry.value("type", std::string());
    if (type == "session") {
        auto s = std::make_unique<Session>();
        s->state.id = entry.at("id").get<std::string>();
        s->state.group = entry.at("group").get<std::string>();
        s->state.label = parse_label(entry.at("label").get<std::string>());
        s->state.annotator = entry.at("annotator").get<std::string>();
        s->state.generation = prompt::GenerationConfig::from_json(entry.at("generation"));
        s->state.seed = entry.at("seed").get<std::uint64_t>();
        next_session_ = std::max(next_session_, entry.at("ordinal").get<std::uint64_t>() + 1);
        sessions_[s->state.id] = std::move(s);
    } else if (type == "candidates") {
        auto& s = find_session(entry.at("session").get<std::string>()).state;
        for (const auto& c : entry.at("candidates")) s.candidates.push_back(candidate_from_json(c));
        s.drawn = entry.at("drawn").get<std::uint64_t>();
    } else if (type == "decision") {
        const auto d = prompt::DecisionEntry::from_json(entry);
        auto& s = find_session(d.session).state;
        const auto cid = entry.at("candidate_id").get<std::string>();
        auto it = std::find_if(s.candidates.begin(), s.candidates.end(), [&](auto& c) { return c.id == cid; });
        if (it == s.candidates.end() || it->decision) {
            fail(ErrorCode::validation, "journal decision for unknown or decided candidate " + cid);
        }
        auto pit = pools_.find({d.group, d.label});
        if (pit == pools_.end()) fail(ErrorCode::not_found, "journal references missing pool " + d.group);
        pit->second = prompt::grow_pool(pit->second, d.candidate, d.decision, d.actor);
        it->decision = d.decision;
    } else {
        fail(ErrorCode::validation, "unknown journal entry type \"" + type + "\"");
    }
}

GatewayService::Session& GatewayService::find_session(const std::string& id) const {
    auto it = sessions_.find(id);
    if (it == sessions_.end()) fail(ErrorCode::not_found, "no session " + id);
    return *it->second;
}

prompt::DemonstrationPool GatewayService::pool_copy(const PoolKey& key) const {
    auto it = pools_.find(key);
    if (it == pools_.end()) {
        fail(ErrorCode::not_found, "no pool for group \"" + key.first + "\" label " + std::string(label_name(key.second)));
    }
    return it->second;
}

json GatewayService::create_session(const json& body) {
    std::string group;
    Label label{};
    std::string annotator;
    prompt::GenerationConfig gen = config_.generation;
    std::uint64_t seed = 0;
    try {
        group = body.at("group").get<std::string>();
        label = parse_label(body.at("label").get<std::string>());
        annotator = body.value("annotator", std::string("anonymous"));
        if (body.contains("method")) gen.method = data::parse_method(body.at("method").get<std::string>());
        if (body.contains("decoder")) gen.decoder = decode::DecoderConfig::from_json(body.at("decoder"));
        gen.demos = body.value("demos", gen.demos);
        seed = body.value("seed", std::uint64_t{0});
    } catch (const json::exception& e) {
        fail(ErrorCode::validation, std::string("bad session request: ") + e.what());
    }
    // ALICE attacks the pool label: toxic pools evade the classifier, benign ones trip it.
    if (gen.method == data::GenerationMethod::alice) {
        if (!models_.classifier) fail(ErrorCode::configuration, "alice sessions need a classifier");
        gen.decoder.mode = decode::adversarial_mode_for(label);
    }

    std::lock_guard lock(mu_);
    (void)pool_copy({group, label});
    const auto ordinal = next_session_;
    const std::string id = "s" + std::to_string(ordinal);
    json entry{{"type", "session"}, {"id", id},       {"ordinal", ordinal},          {"group", group},
               {"label", label_name(label)}, {"annotator", annotator}, {"generation", gen.to_json()},
               {"seed", seed}};
    journal_->append(entry);
    apply(entry);
    return session_json(sessions_.at(id)->state);
}

json GatewayService::session_json(const SessionState& s) const {
    json pending = json::array();
    std::size_t decided = 0;
    for (const auto& c : s.candidates) {
        if (c.decision) {
            ++decided;
        } else {
            pending.push_back(c.to_json());
        }
    }
    const auto& pool = pools_.at({s.group, s.label});
    return {{"session_id", s.id},
            {"group", s.group},
            {"label", label_name(s.label)},
            {"annotator", s.annotator},
            {"method", data::method_name(s.generation.method)},
            {"mode", decode::mode_name(s.generation.decoder.mode)},
            {"seed", s.seed},
            {"pending", std::move(pending)},
            {"decided", decided},
            {"pool_size", pool.size()},
            {"band", {prompt::kRecommendedMinPool, prompt::kRecommendedMaxPool}}};
}

// Lock order is session, then service.
json GatewayService::session(const std::string& id) const {
    Session* s = nullptr;
    {
        std::lock_guard lock(mu_);
        s = &find_session(id);
    }
    std::lock_guard slock(s->mu);
    std::lock_guard lock(mu_);
    return session_json(s->state);
}

json GatewayService::next_candidates(const std::string& session_id, std::size_t n) {
    if (n > config_.max_candidates) {
        fail(ErrorCode::validation, "n must be at most " + std::to_string(config_.max_candidates));
    }
    Session* s = nullptr;
    prompt::DemonstrationPool pool;
    {
        std::lock_guard lock(mu_);
        s = &find_session(session_id);
    }
    std::lock_guard slock(s->mu);
    {
        std::lock_guard lock(mu_);
        pool = pool_copy({s->state.group, s->state.label});
    }

    // Draw k uses Rng(seed).fork(k), so a replayed session continues the same streams.
    std::vector<Candidate> fresh;
    std::uint64_t drawn = s->state.drawn;
    std::size_t skipped = 0;
    const std::uint64_t max_draws = drawn + 4 * n;
    while (fresh.size() < n && drawn < max_draws) {
        const std::uint64_t k = drawn++;
        auto rng = Rng(s->state.seed).fork(k);
        try {
            auto rec = prompt::generate_statement(*models_.lm, models_.classifier.get(), pool, s->state.generation, rng);
            Candidate c;
            c.id = s->state.id + "-" + std::to_string(k);
            c.text = std::move(rec.generation);
            c.clf_score = rec.classifier_prediction;
            if (models_.lexicon) c.implicit = models_.lexicon->is_implicit(c.text);
            c.method = rec.method;
            fresh.push_back(std::move(c));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::empty_generation && e.code() != ErrorCode::no_tokens) throw;
            ++skipped;
        }
    }

    json batch = json::array();
    for (const auto& c : fresh) batch.push_back(c.to_json());
    if (drawn != s->state.drawn) {
        journal_->append({{"type", "candidates"}, {"session", s->state.id}, {"drawn", drawn}, {"candidates", batch}});
        for (auto& c : fresh) s->state.candidates.push_back(std::move(c));
        s->state.drawn = drawn;
    }
    return {{"session_id", s->state.id}, {"candidates", std::move(batch)}, {"skipped", skipped}};
}

json GatewayService::submit_decision(const std::string& session_id, const json& body) {
    std::string cid;
    prompt::Decision decision{};
    std::string actor;
    Session* s = nullptr;
    {
        std::lock_guard lock(mu_);
        s = &find_session(session_id);
    }
    std::lock_guard slock(s->mu);
    try {
        cid = body.at("candidate_id").get<std::string>();
        decision = prompt::parse_decision(body.at("decision").get<std::string>());
        actor = body.value("actor", s->state.annotator);
    } catch (const json::exception& e) {
        fail(ErrorCode::validation, std::string("bad decision request: ") + e.what());
    }
    auto it = std::find_if(s->state.candidates.begin(), s->state.candidates.end(),
                           [&](const Candidate& c) { return c.id == cid; });
    if (it == s->state.candidates.end()) fail(ErrorCode::not_found, "no candidate " + cid + " in " + session_id);
    if (it->decision) {
        fail(ErrorCode::conflict, "candidate " + cid + " was already decided (" +
                                      std::string(prompt::decision_name(*it->decision)) + ")");
    }

    std::lock_guard lock(mu_);
    const PoolKey key{s->state.group, s->state.label};
    // Raises E_DUPLICATE before anything is journaled; the candidate stays pending.
    auto grown = prompt::grow_pool(pools_.at(key), it->text, decision, actor);
    prompt::DecisionEntry d{s->state.group, s->state.label, it->text, decision, actor, s->state.id};
    auto entry = d.to_json();
    entry["candidate_id"] = cid;
    journal_->append(entry);
    pools_.at(key) = std::move(grown);
    it->decision = decision;
    const auto& pool = pools_.at(key);
    return {{"candidate_id", cid},
            {"decision", prompt::decision_name(decision)},
            {"pool_size", pool.size()},
            {"in_band", !pool.size_warning()}};
}

json GatewayService::pools() const {
    std::lock_guard lock(mu_);
    json out = json::array();
    for (const auto& [key, p] : pools_) out.push_back(pool_summary(p));
    return {{"pools", std::move(out)}};
}

json GatewayService::pool(const std::string& group, const std::string& label) const {
    std::lock_guard lock(mu_);
    auto j = pool_copy({group, parse_label(label)}).to_json();
    j["size"] = j.at("sentences").size();
    return j;
}

json GatewayService::pool_snapshot() const {
    std::lock_guard lock(mu_);
    json out = json::array();
    for (const auto& [key, p] : pools_) out.push_back(p.to_json());
    return out;
}

json GatewayService::session_snapshot() const {
    std::vector<std::pair<std::string, Session*>> all;
    {
        std::lock_guard lock(mu_);
        for (const auto& [id, s] : sessions_) all.emplace_back(id, s.get());
    }
    json out = json::array();
    for (const auto& [id, s] : all) {
        std::lock_guard slock(s->mu);
        json cands = json::array();
        for (const auto& c : s->state.candidates) cands.push_back(c.to_json());
        out.push_back({{"session_id", id}, {"drawn", s->state.drawn}, {"candidates", std::move(cands)}});
    }
    return out;
}

json GatewayService::submit_job(const json& body) {
    auto batch = prompt::BatchConfig::from_json(body);
    if (batch.generation.method == data::GenerationMethod::alice && !models_.classifier) {
        fail(ErrorCode::configuration, "alice jobs need a classifier");
    }
    std::lock_guard lock(mu_);
    auto pool = pool_copy({batch.group, batch.label});
    const std::string id = "j" + std::to_string(next_job_++);
    auto job = std::make_unique<Job>();
    job->id = id;
    Job* raw = job.get();
    auto lm = models_.lm;
    auto classifier = models_.classifier;
    raw->worker = std::thread([raw, lm, classifier, pool = std::move(pool), batch = std::move(batch)] {
        raw->status = 1;
        try {
            raw->records = prompt::generate_batch(*lm, classifier.get(), pool, batch);
            raw->status = 2;
        } catch (const Error& e) {
            raw->error = e.what();
            raw->error_code = std::string(error_code_name(e.code()));
            raw->status = 3;
        } catch (const std::exception& e) {
            raw->error = e.what();
            raw->status = 3;
        }
    });
    jobs_.emplace(id, std::move(job));
    return {{"job_id", id}, {"status", "queued"}};
}

json GatewayService::job(const std::string& id) const {
    std::lock_guard lock(mu_);
    auto it = jobs_.find(id);
    if (it == jobs_.end()) fail(ErrorCode::not_found, "no job " + id);
    const Job& j = *it->second;
    const int status = j.status.load();
    json out{{"job_id", id}, {"status", job_status_name(status)}};
    if (status == 2) {
        json rows = json::array();
        for (const auto& r : j.records) rows.push_back(data::to_json(r));
        out["records"] = std::move(rows);
    } else if (status == 3) {
        out["error"] = j.error;
        out["code"] = j.error_code;
    }
    return out;
}

int http_status(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::validation:
        case ErrorCode::configuration: return 400;
        case ErrorCode::not_found: return 404;
        case ErrorCode::duplicate:
        case ErrorCode::conflict: return 409;
        case ErrorCode::backend:
        case ErrorCode::protocol: return 502;
        case ErrorCode::no_tokens:
        case ErrorCode::empty_generation:
        case ErrorCode::split_infeasible:
        case ErrorCode::contamination: return 422;
        case ErrorCode::io: return 500;
    }
    return 500;
}

json error_body(const Error& e) {
    return {{"error", e.what()},
            {"code", error_code_name(e.code())},
            {"retriable", e.code() == ErrorCode::backend}};
}

}  // namespace advgen::gateway
