#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "doctest.h"
#include "httplib.h"

#include "advgen/core/error.hpp"
#include "advgen/core/journal.hpp"
#include "advgen/decode/topk.hpp"
#include "advgen/gateway/mock_backend.hpp"
#include "advgen/gateway/remote.hpp"
#include "advgen/gateway/service.hpp"
#include "advgen/lm/tokenizer.hpp"
#include "support/bad_token.hpp"
#include "support/toy_models.hpp"

using namespace advgen;
using namespace advgen::gateway;
namespace fs = std::filesystem;
using namespace std::chrono_literals;

namespace {

constexpr const char* kTokenEnv = "ADVGEN_TEST_BACKEND_TOKEN";
constexpr const char* kSecret = "s3cret-token-value";

fs::path scratch_dir(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("advgen_test_gateway_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

// Base pools: the two fixture pools plus one whose group needs URL escaping.
fs::path make_pools(const fs::path& root) {
    const auto& fx = testing::BadTokenFixture::get();
    const auto dir = root / "pools";
    fs::create_directories(dir);
    prompt::save_pool(dir, prompt::DemonstrationPool::from_sentences("zorblat", Label::toxic, fx.toxic_pool));
    prompt::save_pool(dir, prompt::DemonstrationPool::from_sentences("zorblat", Label::benign, fx.benign_pool));
    prompt::save_pool(dir, prompt::DemonstrationPool::from_sentences(
                               "LGBTQ+", Label::benign, std::vector<std::string>(fx.benign_pool.begin(),
                                                                                 fx.benign_pool.begin() + 5)));
    return dir;
}

ServiceModels fixture_models() {
    const auto& fx = testing::BadTokenFixture::get();
    ServiceModels m;
    // The fixture is a static; alias it without taking ownership.
    m.lm = std::shared_ptr<const lm::LanguageModel>(std::shared_ptr<void>(), &fx.model);
    m.classifier = std::shared_ptr<const clf::ToxicityClassifier>(std::shared_ptr<void>(), &fx.classifier);
    m.lexicon = std::make_shared<data::ProfanityLexicon>(
        data::ProfanityLexicon::load(fs::path(ADVGEN_DATA_DIR) / "lexicon" / "test_profanity.txt"));
    return m;
}

ServiceConfig service_config(const fs::path& root) {
    ServiceConfig c;
    c.pools_dir = fs::exists(root / "pools") ? root / "pools" : make_pools(root);
    c.journal = root / "journal.jsonl";
    c.lm = root / "unused-model.json";
    return c;
}

json post(httplib::Client& cli, const std::string& path, const json& body, int expect) {
    auto res = cli.Post(path, body.dump(), "application/json");
    REQUIRE(res);
    CHECK_MESSAGE(res->status == expect, path << " -> " << res->status << " " << res->body);
    return json::parse(res->body);
}

json get(httplib::Client& cli, const std::string& path, int expect) {
    auto res = cli.Get(path);
    REQUIRE(res);
    CHECK_MESSAGE(res->status == expect, path << " -> " << res->status << " " << res->body);
    return json::parse(res->body);
}

RemoteConfig remote_to(const MockBackend& mock, std::size_t logprobs_n = 100) {
    RemoteConfig rc;
    rc.url = mock.url();
    rc.token_env = kTokenEnv;
    rc.timeout = 2000ms;
    rc.retries = 3;
    rc.logprobs_n = logprobs_n;
    return rc;
}

}  // namespace

TEST_CASE("remote config validation and JSON") {
    RemoteConfig rc;
    rc.url = "http://127.0.0.1:9/x";
    rc.token_env = "T";
    auto back = RemoteConfig::from_json(rc.to_json());
    CHECK(back.to_json() == rc.to_json());
    CHECK(back.retries == 3);
    CHECK(back.logprobs_n == 100);
    CHECK_THROWS_AS(RemoteConfig::from_json({{"url", "ftp://x"}}), Error);
    CHECK_THROWS_AS(RemoteConfig::from_json({{"url", "http://x"}, {"retries", 0}}), Error);
    CHECK_THROWS_AS(RemoteConfig::from_json(json::object()), Error);
}

TEST_CASE("response parsing") {
    CHECK(RemoteClient::parse_response(R"({"text":"hi"})", false).text == "hi");
    auto c = RemoteClient::parse_response(R"({"top_logprobs":[{"a":-0.1,"b":-2.5}]})", true);
    REQUIRE(c.top_logprobs.size() == 1);
    CHECK(c.top_logprobs[0].at("b") == -2.5);
    auto code = [](const std::string& body, bool lp) {
        try {
            RemoteClient::parse_response(body, lp);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::validation;
    };
    CHECK(code("not json", false) == ErrorCode::protocol);
    CHECK(code("[1,2]", false) == ErrorCode::protocol);
    CHECK(code(R"({"text":3})", false) == ErrorCode::protocol);
    CHECK(code(R"({"text":"x"})", true) == ErrorCode::protocol);
    CHECK(code(R"({"top_logprobs":[{"a":"high"}]})", true) == ErrorCode::protocol);
    CHECK(code(R"({"top_logprobs":[{"a":0.5}]})", true) == ErrorCode::protocol);
}

TEST_CASE("remote completion round trip against the mock") {
    ::setenv(kTokenEnv, kSecret, 1);
    MockBackend mock;
    MockBackend::Behaviour b;
    b.completion = "they keep to themselves";
    mock.set_behaviour(b);

    RemoteClient client(remote_to(mock));
    CompletionParams p;
    p.max_tokens = 12;
    p.temperature = 0.7;
    p.top_k = 20;
    const auto c = client.complete("- a\n- b\n-", p);
    CHECK(c.text == "they keep to themselves");
    CHECK(c.top_logprobs.empty());

    const auto reqs = mock.requests();
    REQUIRE(reqs.size() == 1);
    CHECK(reqs[0].at("prompt") == "- a\n- b\n-");
    CHECK(reqs[0].at("max_tokens") == 12);
    CHECK(reqs[0].at("temperature") == 0.7);
    CHECK(reqs[0].at("top_k") == 20);
    CHECK(reqs[0].at("logprobs_n") == 0);
    CHECK(mock.authorization_headers().at(0) == std::string("Bearer ") + kSecret);
}

TEST_CASE("timeouts are retried exactly `retries` times, then E_BACKEND") {
    ::setenv(kTokenEnv, kSecret, 1);
    MockBackend mock;
    MockBackend::Behaviour b;
    b.stall_first = 100;
    b.stall = 400ms;
    mock.set_behaviour(b);

    auto rc = remote_to(mock);
    rc.timeout = 100ms;
    rc.retries = 3;
    RemoteClient client(rc);
    try {
        client.complete("x", {});
        FAIL("expected E_BACKEND");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::backend);
        CHECK(std::string(e.what()).find(kSecret) == std::string::npos);
    }
    // Stalled handlers register before sleeping, so the count is exact once they return.
    std::this_thread::sleep_for(500ms);
    CHECK(mock.request_count() == 3);
}

TEST_CASE("5xx answers are retried; other statuses and bad bodies are not") {
    ::setenv(kTokenEnv, kSecret, 1);
    MockBackend mock;
    MockBackend::Behaviour b;
    b.error_first = 2;
    b.completion = "ok";
    mock.set_behaviour(b);
    RemoteClient client(remote_to(mock));
    CHECK(client.complete("x", {}).text == "ok");
    CHECK(mock.request_count() == 3);

    b = {};
    b.status = 400;
    mock.set_behaviour(b);
    CHECK_THROWS_WITH_AS(client.complete("x", {}), doctest::Contains("HTTP 400"), Error);
    CHECK(mock.request_count() == 1);

    b = {};
    b.malformed = true;
    mock.set_behaviour(b);
    try {
        client.complete("x", {});
        FAIL("expected E_PROTOCOL");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::protocol);
    }
    CHECK(mock.request_count() == 1);
}

TEST_CASE("remote language model mirrors the wrapped model inside its window") {
    ::setenv(kTokenEnv, kSecret, 1);
    const testing::RandomLanguageModel local(testing::toy_vocabulary(150, {",", "."}), 11);
    MockBackend mock;
    MockBackend::Behaviour b;
    b.model = &local;
    mock.set_behaviour(b);

    RemoteLanguageModel remote(RemoteClient(remote_to(mock, 100)), local.vocabulary());
    REQUIRE(remote.logprob_window() == std::size_t{100});

    const std::vector<lm::TokenId> ctx{5, 9, 3};
    const auto want = local.next_token_logprobs(ctx);
    const auto got = remote.next_token_logprobs(ctx);
    REQUIRE(got.size() == want.size());
    std::size_t finite = 0;
    for (std::size_t i = 0; i < got.size(); ++i) {
        if (!std::isfinite(got[i])) continue;
        ++finite;
        CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
    }
    // At most 100 entries arrive; BOS and UNK among them are discarded.
    CHECK(finite <= 100);
    CHECK(finite >= 98);
    CHECK(mock.requests().at(0).at("max_tokens") == 1);
    CHECK(mock.requests().at(0).at("logprobs_n") == 100);

    // The window clamps the decoder's candidate set to the remote's top 100.
    decode::DecoderConfig cfg;
    cfg.top_v = 500;
    CHECK(cfg.resolved(remote.vocabulary().size(), remote.logprob_window()).top_v == 100);
}

TEST_CASE("top-k through the remote backend equals local decoding when the window covers the vocabulary") {
    ::setenv(kTokenEnv, kSecret, 1);
    const testing::RandomLanguageModel local(testing::toy_vocabulary(30, {"."}), 5);
    MockBackend mock;
    MockBackend::Behaviour b;
    b.model = &local;
    mock.set_behaviour(b);
    RemoteLanguageModel remote(RemoteClient(remote_to(mock, 100)), local.vocabulary());

    decode::DecoderConfig cfg;
    cfg.top_v = 1000;
    cfg.max_tokens = 6;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto prompt = lm::tokenize("w1 w2 w3", local.vocabulary());
        Rng r1(seed), r2(seed);
        const auto a = decode::top_k_continuation(local, prompt, cfg, r1);
        const auto c = decode::top_k_continuation(remote, prompt, cfg, r2);
        CHECK(a.ids == c.ids);
    }
}

TEST_CASE("error codes map to HTTP statuses") {
    CHECK(http_status(ErrorCode::validation) == 400);
    CHECK(http_status(ErrorCode::configuration) == 400);
    CHECK(http_status(ErrorCode::not_found) == 404);
    CHECK(http_status(ErrorCode::conflict) == 409);
    CHECK(http_status(ErrorCode::duplicate) == 409);
    CHECK(http_status(ErrorCode::backend) == 502);
    CHECK(http_status(ErrorCode::protocol) == 502);
    CHECK(error_body(Error(ErrorCode::backend, "down")).at("retriable") == true);
    CHECK(error_body(Error(ErrorCode::protocol, "bad")).at("retriable") == false);
    CHECK(error_body(Error(ErrorCode::duplicate, "dup")).at("code") == "E_DUPLICATE");
}

TEST_CASE("service config file") {
    const auto root = scratch_dir("config");
    json j{{"pools_dir", "pools"}, {"journal", "state/journal.jsonl"}, {"lm", "/abs/model.json"}, {"port", 0}};
    const auto c = ServiceConfig::from_json(j, root);
    CHECK(c.pools_dir == root / "pools");
    CHECK(c.journal == root / "state/journal.jsonl");
    CHECK(*c.lm == fs::path("/abs/model.json"));
    CHECK(c.max_candidates == 50);
    CHECK_THROWS_AS(ServiceConfig::from_json({{"pools_dir", "p"}, {"journal", "j"}}), Error);
    json both = j;
    both["remote"] = {{"url", "http://h/x"}, {"vocabulary", "v.txt"}};
    CHECK_THROWS_AS(ServiceConfig::from_json(both), Error);
    json remote_only{{"pools_dir", "p"}, {"journal", "j"}, {"remote", {{"url", "http://h/x"}}}};
    CHECK_THROWS_AS(ServiceConfig::from_json(remote_only), Error);
}

TEST_CASE("session lifecycle over HTTP") {
    const auto root = scratch_dir("lifecycle");
    GatewayService service(service_config(root), fixture_models());
    GatewayServer server(service, "127.0.0.1", 0);
    server.start();
    httplib::Client cli("127.0.0.1", server.port());

    CHECK(get(cli, "/healthz", 200) == json{{"status", "ok"}});

    auto pools = get(cli, "/pools", 200).at("pools");
    CHECK(pools.size() == 3);
    auto escaped = get(cli, "/pools/LGBTQ%2B/benign", 200);
    CHECK(escaped.at("group") == "LGBTQ+");
    CHECK(escaped.at("size") == 5);
    get(cli, "/pools/zorblat/nasty", 400);
    get(cli, "/pools/nobody/toxic", 404);

    post(cli, "/sessions", {{"group", "nobody"}, {"label", "toxic"}}, 404);
    post(cli, "/sessions", {{"label", "toxic"}}, 400);
    auto s = post(cli, "/sessions",
                  {{"group", "zorblat"}, {"label", "toxic"}, {"annotator", "ann1"}, {"method", "top-k"}, {"seed", 3}},
                  201);
    const std::string sid = s.at("session_id");
    CHECK(s.at("pool_size") == 30);
    CHECK(s.at("band") == json::array({20, 50}));
    get(cli, "/sessions/nope", 404);
    post(cli, "/sessions/nope/candidates?n=1", json::object(), 404);

    auto empty = post(cli, "/sessions/" + sid + "/candidates?n=0", json::object(), 200);
    CHECK(empty.at("candidates").empty());
    post(cli, "/sessions/" + sid + "/candidates?n=abc", json::object(), 400);
    post(cli, "/sessions/" + sid + "/candidates?n=51", json::object(), 400);

    auto batch = post(cli, "/sessions/" + sid + "/candidates?n=4", json::object(), 200).at("candidates");
    REQUIRE(batch.size() == 4);
    std::set<std::string> ids;
    for (const auto& c : batch) {
        CHECK(c.at("text").is_string());
        CHECK(!c.at("text").get<std::string>().empty());
        CHECK(c.at("clf_score").is_number());
        CHECK(c.at("implicit").is_boolean());
        CHECK(c.at("method") == "top-k");
        ids.insert(c.at("id").get<std::string>());
    }
    CHECK(ids.size() == 4);
    CHECK(get(cli, "/sessions/" + sid, 200).at("pending").size() == 4);

    const std::string c0 = batch[0].at("id");
    const std::string c1 = batch[1].at("id");
    auto accepted = post(cli, "/sessions/" + sid + "/decisions", {{"candidate_id", c0}, {"decision", "accept"}}, 200);
    CHECK(accepted.at("pool_size") == 31);
    auto rejected = post(cli, "/sessions/" + sid + "/decisions", {{"candidate_id", c1}, {"decision", "reject"}}, 200);
    CHECK(rejected.at("pool_size") == 31);
    auto again = post(cli, "/sessions/" + sid + "/decisions", {{"candidate_id", c0}, {"decision", "reject"}}, 409);
    CHECK(again.at("code") == "E_CONFLICT");
    post(cli, "/sessions/" + sid + "/decisions", {{"candidate_id", "missing"}, {"decision", "accept"}}, 404);
    post(cli, "/sessions/" + sid + "/decisions", {{"candidate_id", c1}, {"decision", "maybe"}}, 400);

    auto state = get(cli, "/sessions/" + sid, 200);
    CHECK(state.at("pending").size() == 2);
    CHECK(state.at("decided") == 2);
    auto pool = get(cli, "/pools/zorblat/toxic", 200);
    CHECK(pool.at("sentences").back() == batch[0].at("text"));
    CHECK(pool.at("provenance").back() == "human_accepted");

    server.stop();
}

TEST_CASE("duplicate accept surfaces E_DUPLICATE and leaves the candidate pending") {
    const auto root = scratch_dir("duplicate");
    GatewayService service(service_config(root), fixture_models());
    // Equal seeds draw equal candidates for the same pool state.
    auto a = service.create_session({{"group", "zorblat"}, {"label", "benign"}, {"seed", 9}});
    auto b = service.create_session({{"group", "zorblat"}, {"label", "benign"}, {"seed", 9}});
    auto ca = service.next_candidates(a.at("session_id"), 1).at("candidates").at(0);
    auto cb = service.next_candidates(b.at("session_id"), 1).at("candidates").at(0);
    REQUIRE(ca.at("text") == cb.at("text"));

    service.submit_decision(a.at("session_id"), {{"candidate_id", ca.at("id")}, {"decision", "accept"}});
    try {
        service.submit_decision(b.at("session_id"), {{"candidate_id", cb.at("id")}, {"decision", "accept"}});
        FAIL("expected E_DUPLICATE");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::duplicate);
        CHECK(http_status(e.code()) == 409);
    }
    CHECK(service.session(b.at("session_id")).at("pending").size() == 1);
    CHECK(service.submit_decision(b.at("session_id"), {{"candidate_id", cb.at("id")}, {"decision", "reject"}})
              .at("pool_size") == 31);
}

TEST_CASE("alice sessions attack the pool label") {
    const auto root = scratch_dir("modes");
    GatewayService service(service_config(root), fixture_models());
    auto t = service.create_session({{"group", "zorblat"}, {"label", "toxic"}, {"method", "alice"}});
    auto b = service.create_session({{"group", "zorblat"}, {"label", "benign"}, {"method", "alice"}});
    CHECK(t.at("mode") == "false_negative");
    CHECK(b.at("mode") == "false_positive");
    auto cands = service.next_candidates(t.at("session_id"), 2).at("candidates");
    REQUIRE(cands.size() == 2);
    CHECK(cands[0].at("method") == "alice");

    auto models = fixture_models();
    models.classifier.reset();
    GatewayService no_clf(service_config(scratch_dir("modes_noclf")), models);
    CHECK_THROWS_AS(no_clf.create_session({{"group", "zorblat"}, {"label", "toxic"}, {"method", "alice"}}), Error);
}

TEST_CASE("journal replay after a simulated crash reconstructs pools and sessions byte for byte") {
    const auto root = scratch_dir("replay");
    const auto cfg = service_config(root);
    std::string pools_before, sessions_before;
    {
        GatewayService service(cfg, fixture_models());
        auto s1 = service.create_session({{"group", "zorblat"}, {"label", "toxic"}, {"seed", 1}});
        auto s2 = service.create_session({{"group", "zorblat"}, {"label", "benign"}, {"method", "alice"}, {"seed", 2}});
        for (const auto& s : {s1, s2}) {
            const std::string id = s.at("session_id");
            auto cands = service.next_candidates(id, 5).at("candidates");
            for (std::size_t i = 0; i < cands.size(); ++i) {
                try {
                    service.submit_decision(id, {{"candidate_id", cands[i].at("id")},
                                                 {"decision", i % 3 == 2 ? "reject" : "accept"}});
                } catch (const Error& e) {
                    CHECK(e.code() == ErrorCode::duplicate);
                }
            }
        }
        pools_before = service.pool_snapshot().dump();
        sessions_before = service.session_snapshot().dump();
        // No shutdown hook runs: the service is dropped with its state only in the journal.
    }
    // A crash mid-append leaves an unterminated line.
    {
        std::FILE* f = std::fopen(cfg.journal.c_str(), "ab");
        std::fputs(R"({"type":"decision","group":"zorb)", f);
        std::fclose(f);
    }

    GatewayService replayed(cfg, fixture_models());
    CHECK(replayed.pool_snapshot().dump() == pools_before);
    CHECK(replayed.session_snapshot().dump() == sessions_before);

    // The recovered service continues the same candidate streams as a twin replay.
    const auto copy = root / "journal_copy.jsonl";
    fs::copy_file(cfg.journal, copy);
    auto twin_cfg = cfg;
    twin_cfg.journal = copy;
    GatewayService twin(twin_cfg, fixture_models());
    CHECK(replayed.next_candidates("s1", 3).dump() == twin.next_candidates("s1", 3).dump());

    // Pools grew beyond the base files.
    const auto base = prompt::load_pool(cfg.pools_dir, "zorblat", Label::toxic);
    CHECK(replayed.pool("zorblat", "toxic").at("size").get<std::size_t>() > base.size());
}

TEST_CASE("generation jobs") {
    const auto root = scratch_dir("jobs");
    GatewayService service(service_config(root), fixture_models());
    GatewayServer server(service, "127.0.0.1", 0);
    server.start();
    httplib::Client cli("127.0.0.1", server.port());

    json batch{{"group", "zorblat"}, {"label", "toxic"}, {"method", "top-k"}, {"count", 6}, {"seeds", {4}}};
    auto submitted = post(cli, "/generate", batch, 202);
    const std::string id = submitted.at("job_id");
    json job;
    for (int i = 0; i < 200; ++i) {
        job = get(cli, "/jobs/" + id, 200);
        if (job.at("status") == "done" || job.at("status") == "failed") break;
        std::this_thread::sleep_for(20ms);
    }
    REQUIRE(job.at("status") == "done");
    CHECK(job.at("records").size() == 6);
    CHECK(job.at("records").at(0).at("group") == "zorblat");

    auto second = post(cli, "/generate", batch, 202);
    service.drain();
    CHECK(get(cli, "/jobs/" + second.at("job_id").get<std::string>(), 200).at("records") == job.at("records"));

    get(cli, "/jobs/j999", 404);
    batch["group"] = "nobody";
    post(cli, "/generate", batch, 404);
    post(cli, "/generate", {{"group", "zorblat"}}, 400);
    server.stop();
}

TEST_CASE("an unreachable backend answers 502 with the retriable flag") {
    ::setenv(kTokenEnv, kSecret, 1);
    const auto root = scratch_dir("unreachable");
    const auto& fx = testing::BadTokenFixture::get();
    auto mock = std::make_unique<MockBackend>();
    auto rc = remote_to(*mock);
    rc.timeout = 200ms;
    rc.retries = 2;
    mock.reset();  // nothing listens on the port any more

    auto models = fixture_models();
    models.lm = std::make_shared<RemoteLanguageModel>(RemoteClient(rc), fx.model.vocabulary());
    GatewayService service(service_config(root), models);
    GatewayServer server(service, "127.0.0.1", 0);
    server.start();
    httplib::Client cli("127.0.0.1", server.port());

    auto s = post(cli, "/sessions", {{"group", "zorblat"}, {"label", "toxic"}}, 201);
    auto res = cli.Post("/sessions/" + s.at("session_id").get<std::string>() + "/candidates?n=1", "{}",
                        "application/json");
    REQUIRE(res);
    CHECK(res->status == 502);
    const auto body = json::parse(res->body);
    CHECK(body.at("code") == "E_BACKEND");
    CHECK(body.at("retriable") == true);
    CHECK(res->body.find(kSecret) == std::string::npos);
    // Nothing was committed for the failed batch.
    CHECK(service.session(s.at("session_id")).at("pending").empty());
    server.stop();
}

TEST_CASE("a taken port is a startup error") {
    const auto root = scratch_dir("port");
    GatewayService service(service_config(root), fixture_models());
    GatewayServer first(service, "127.0.0.1", 0);
    try {
        GatewayServer second(service, "127.0.0.1", first.port());
        FAIL("expected a bind failure");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::io);
    }
}

TEST_CASE("bearer token guards every endpoint but the health check") {
    ::setenv("ADVGEN_TEST_SERVICE_TOKEN", "svc-token", 1);
    const auto root = scratch_dir("auth");
    GatewayService service(service_config(root), fixture_models());
    GatewayServer server(service, "127.0.0.1", 0, "ADVGEN_TEST_SERVICE_TOKEN");
    server.start();
    httplib::Client cli("127.0.0.1", server.port());
    get(cli, "/healthz", 200);
    auto denied = get(cli, "/pools", 401);
    CHECK(denied.dump().find("svc-token") == std::string::npos);
    cli.set_bearer_token_auth("wrong");
    get(cli, "/pools", 401);
    cli.set_bearer_token_auth("svc-token");
    get(cli, "/pools", 200);
    server.stop();

    ::unsetenv("ADVGEN_TEST_UNSET_TOKEN");
    CHECK_THROWS_AS(GatewayServer(service, "127.0.0.1", 0, "ADVGEN_TEST_UNSET_TOKEN"), Error);
}
