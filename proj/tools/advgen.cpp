// advgen command-line entry point. Each subcommand parses flags, calls one
// library entry point and writes its outputs plus a run manifest.

#include <csignal>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"

#include "advgen/annot/agreement.hpp"
#include "advgen/annot/record.hpp"
#include "advgen/clf/classifier.hpp"
#include "advgen/core/error.hpp"
#include "advgen/core/io.hpp"
#include "advgen/core/manifest.hpp"
#include "advgen/core/rng.hpp"
#include "advgen/data/balance.hpp"
#include "advgen/data/lexicon.hpp"
#include "advgen/data/record.hpp"
#include "advgen/data/similarity.hpp"
#include "advgen/data/stats.hpp"
#include "advgen/eval/auc.hpp"
#include "advgen/eval/compare.hpp"
#include "advgen/eval/corpus_reports.hpp"
#include "advgen/eval/finetune.hpp"
#include "advgen/gateway/remote.hpp"
#include "advgen/gateway/service.hpp"
#include "advgen/lm/ngram_model.hpp"
#include "advgen/prompt/generate.hpp"
#include "advgen/prompt/pool.hpp"

namespace fs = std::filesystem;
using namespace advgen;

namespace {

RunManifest start_manifest(const std::string& command, std::uint64_t seed) {
    RunManifest m;
    m.command = command;
    m.seeds = {seed};
    m.version = ADVGEN_VERSION;
    m.started_at = utc_timestamp();
    return m;
}

// "-" is stdout.
void emit(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text << std::flush;
    } else {
        write_text(path, text);
    }
}

void emit_artifact(const std::string& path, const std::string& text, RunManifest manifest) {
    emit(path, text);
    if (path == "-") return;
    manifest.outputs.push_back(path);
    write_manifest(path, std::move(manifest));
}

std::vector<std::string> generations(const std::vector<data::GenerationRecord>& records) {
    std::vector<std::string> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.generation);
    return out;
}

clf::TrainMeta train_meta(int epochs, double lr, double l2, std::uint64_t seed) {
    clf::TrainMeta m;
    m.epochs = epochs;
    m.learning_rate = lr;
    m.l2 = l2;
    m.seed = seed;
    return m;
}

std::unique_ptr<lm::LanguageModel> load_remote(const fs::path& file) {
    const auto j = read_json(file);
    if (!j.contains("vocabulary")) fail(ErrorCode::configuration, "remote config needs a \"vocabulary\" file");
    fs::path vocab = j.at("vocabulary").get<std::string>();
    if (vocab.is_relative()) vocab = file.parent_path() / vocab;
    return std::make_unique<gateway::RemoteLanguageModel>(gateway::RemoteClient(gateway::RemoteConfig::from_json(j)),
                                                          gateway::read_vocabulary(vocab));
}

int serve(const gateway::ServiceConfig& config) {
    // Block the stop signals before any thread starts so only sigwait sees them.
    sigset_t stop_signals;
    sigemptyset(&stop_signals);
    sigaddset(&stop_signals, SIGINT);
    sigaddset(&stop_signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);

    gateway::GatewayService service(config, gateway::ServiceModels::load(config));
    gateway::GatewayServer server(service, config.host, config.port, config.auth_token_env);
    server.start();
    spdlog::info("serving on {}:{} (journal {})", config.host, server.port(), config.journal.string());
    int sig = 0;
    sigwait(&stop_signals, &sig);
    spdlog::info("signal {} received, shutting down", sig);
    server.stop();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    spdlog::set_default_logger(spdlog::stderr_color_mt("advgen"));

    CLI::App app{"advgen: adversarial implicit-toxicity generation and evaluation toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    bool quiet = false;
    app.add_flag("-q,--quiet", quiet, "Log warnings and errors only");

    std::uint64_t seed = 0;
    std::function<int()> action;
    auto command = [&](const std::string& name, const std::string& help, CLI::App* parent = nullptr) {
        auto* sub = (parent != nullptr ? parent : &app)->add_subcommand(name, help);
        sub->add_option("--seed", seed, "Random seed")->capture_default_str();
        return sub;
    };

    // train-lm
    std::string corpus, out;
    int order = lm::NGramModel::kDefaultOrder;
    double smoothing = lm::NGramModel::kDefaultSmoothing;
    auto* train_lm = command("train-lm", "Train the n-gram language model on one sentence per line");
    train_lm->add_option("--corpus", corpus, "Training text")->required()->check(CLI::ExistingFile);
    train_lm->add_option("--order", order)->capture_default_str();
    train_lm->add_option("--smoothing", smoothing, "Add-k constant")->capture_default_str();
    train_lm->add_option("--out", out, "Model file")->required();
    train_lm->callback([&] {
        action = [&] {
            auto m = start_manifest("train-lm", seed);
            m.config = {{"order", order}, {"smoothing", smoothing}};
            m.inputs = {corpus};
            const auto lines = read_lines(corpus);
            const auto model = lm::NGramModel::train(lines, order, smoothing);
            model.save(out);
            m.outputs = {out};
            write_manifest(out, m);
            spdlog::info("trained order-{} model on {} lines, vocabulary {}", order, lines.size(),
                         model.vocabulary().size());
            return 0;
        };
    });

    // train-clf
    std::string train_file, warm_start;
    int epochs = 200;
    double lr = 0.1, l2 = 1e-4;
    auto* train_clf = command("train-clf", "Train the linear toxicity classifier on {text, label} JSONL");
    train_clf->add_option("--train", train_file)->required()->check(CLI::ExistingFile);
    train_clf->add_option("--epochs", epochs)->capture_default_str();
    train_clf->add_option("--lr", lr)->capture_default_str();
    train_clf->add_option("--l2", l2)->capture_default_str();
    train_clf->add_option("--warm-start", warm_start, "Start from this classifier")->check(CLI::ExistingFile);
    train_clf->add_option("--out", out, "Classifier file")->required();
    train_clf->callback([&] {
        action = [&] {
            auto m = start_manifest("train-clf", seed);
            const auto meta = train_meta(epochs, lr, l2, seed);
            m.config = {{"epochs", epochs}, {"learning_rate", lr}, {"l2", l2}};
            m.inputs = {train_file};
            std::optional<clf::LinearClassifier> warm;
            if (!warm_start.empty()) {
                warm = clf::LinearClassifier::load(warm_start);
                m.inputs.push_back(warm_start);
            }
            const auto data = clf::read_labeled_jsonl(train_file);
            const auto model = clf::train_classifier(data, meta, warm ? &*warm : nullptr);
            model.save(out);
            m.outputs = {out};
            write_manifest(out, m);
            spdlog::info("trained classifier on {} examples", data.size());
            return 0;
        };
    });

    // generate
    std::string lm_file, remote_file, clf_file, pools_dir, batch_file, group, label = "toxic", method = "top-k";
    std::string mode, selection;
    std::size_t count = 1;
    prompt::GenerationConfig gen_defaults;
    auto dec = gen_defaults.decoder;
    std::size_t demos = gen_defaults.demos, retry_budget = gen_defaults.retry_budget;
    out = "-";
    auto* generate = command("generate", "Generate statements from a demonstration pool (top-k or ALICE)");
    auto* lm_opt = generate->add_option("--lm", lm_file, "n-gram model file")->check(CLI::ExistingFile);
    generate->add_option("--remote", remote_file, "Remote backend config (JSON)")
        ->check(CLI::ExistingFile)
        ->excludes(lm_opt);
    generate->add_option("--clf", clf_file, "Classifier (required for alice)")->check(CLI::ExistingFile);
    generate->add_option("--pools", pools_dir, "Pool directory")->required()->check(CLI::ExistingDirectory);
    generate->add_option("--config", batch_file, "Batch job file; explicit flags override it")
        ->check(CLI::ExistingFile);
    auto* group_opt = generate->add_option("--group", group);
    auto* label_opt = generate->add_option("--label", label)->check(CLI::IsMember({"toxic", "benign"}));
    auto* method_opt = generate->add_option("--method", method)->check(CLI::IsMember({"alice", "top-k"}));
    auto* count_opt = generate->add_option("--count", count);
    generate->add_option("--mode", mode, "Decoder mode (default: attack the pool label)")
        ->check(CLI::IsMember({"false_negative", "false_positive", "plain"}));
    generate->add_option("--selection", selection)->check(CLI::IsMember({"deterministic", "stochastic"}));
    auto* beam_opt = generate->add_option("--beam-size", dec.beam_size)->capture_default_str();
    auto* maxtok_opt = generate->add_option("--max-tokens", dec.max_tokens)->capture_default_str();
    auto* topv_opt = generate->add_option("--top-v", dec.top_v)->capture_default_str();
    auto* resample_opt = generate->add_option("--resample-k", dec.resample_k)->capture_default_str();
    auto* temp_opt = generate->add_option("--temperature", dec.temperature)->capture_default_str();
    auto* llm_opt = generate->add_option("--lambda-lm", dec.lambda_lm)->capture_default_str();
    auto* lclf_opt = generate->add_option("--lambda-clf", dec.lambda_clf)->capture_default_str();
    auto* demos_opt = generate->add_option("--demos", demos)->capture_default_str();
    auto* retry_opt = generate->add_option("--retry-budget", retry_budget)->capture_default_str();
    generate->add_option("--out", out, "JSONL output, - for stdout")->capture_default_str();
    generate->callback([&] {
        action = [&] {
            if (lm_file.empty() && remote_file.empty()) fail(ErrorCode::validation, "generate needs --lm or --remote");
            prompt::BatchConfig batch;
            if (!batch_file.empty()) batch = prompt::BatchConfig::from_json(read_json(batch_file));
            auto& g = batch.generation;
            auto& d = g.decoder;
            if (batch_file.empty() || group_opt->count()) batch.group = group;
            if (batch_file.empty() || label_opt->count()) batch.label = parse_label(label);
            if (batch_file.empty() || count_opt->count()) batch.count = count;
            if (batch_file.empty() || generate->get_option("--seed")->count()) batch.seeds = {seed};
            if (batch_file.empty() || method_opt->count()) g.method = data::parse_method(method);
            for (auto [opt, apply] : std::initializer_list<std::pair<CLI::Option*, std::function<void()>>>{
                     {beam_opt, [&] { d.beam_size = dec.beam_size; }},
                     {maxtok_opt, [&] { d.max_tokens = dec.max_tokens; }},
                     {topv_opt, [&] { d.top_v = dec.top_v; }},
                     {resample_opt, [&] { d.resample_k = dec.resample_k; }},
                     {temp_opt, [&] { d.temperature = dec.temperature; }},
                     {llm_opt, [&] { d.lambda_lm = dec.lambda_lm; }},
                     {lclf_opt, [&] { d.lambda_clf = dec.lambda_clf; }},
                     {demos_opt, [&] { g.demos = demos; }},
                     {retry_opt, [&] { g.retry_budget = retry_budget; }}}) {
                if (batch_file.empty() || opt->count()) apply();
            }
            if (!selection.empty()) d.selection = decode::parse_selection(selection);
            d.mode = mode.empty() ? decode::adversarial_mode_for(batch.label) : decode::parse_mode(mode);
            require(!batch.group.empty(), "generate needs --group");

            auto m = start_manifest("generate", batch.seeds.front());
            m.seeds = batch.seeds;
            m.config = batch.to_json();
            std::unique_ptr<lm::LanguageModel> model;
            if (!lm_file.empty()) {
                model = std::make_unique<lm::NGramModel>(lm::NGramModel::load(lm_file));
                m.inputs.push_back(lm_file);
            } else {
                model = load_remote(remote_file);
                m.inputs.push_back(remote_file);
            }
            std::optional<clf::LinearClassifier> classifier;
            if (!clf_file.empty()) {
                classifier = clf::LinearClassifier::load(clf_file);
                m.inputs.push_back(clf_file);
            }
            const auto pool = prompt::load_pool(pools_dir, batch.group, batch.label);
            m.inputs.push_back(pools_dir);
            if (pool.size_warning()) {
                spdlog::warn("pool {}/{} has {} sentences, outside the recommended {}-{}", pool.group(),
                             label_name(pool.label()), pool.size(), prompt::kRecommendedMinPool,
                             prompt::kRecommendedMaxPool);
            }
            const auto records = prompt::generate_batch(*model, classifier ? &*classifier : nullptr, pool, batch);
            emit_artifact(out, data::records_to_jsonl(records), m);
            spdlog::info("generated {} records", records.size());
            return 0;
        };
    });

    // stats
    std::string data_file, lexicon_file;
    std::vector<std::string> ambiguous(data::ProfanityLexicon::kDefaultAmbiguous.begin(),
                                       data::ProfanityLexicon::kDefaultAmbiguous.end());
    std::string json_out;
    auto* stats = command("stats", "Per-group length and implicitness statistics");
    stats->add_option("--data", data_file)->required()->check(CLI::ExistingFile);
    stats->add_option("--lexicon", lexicon_file, "Profanity word list")->required()->check(CLI::ExistingFile);
    stats->add_option("--ambiguous", ambiguous, "Lexicon words to ignore")->capture_default_str();
    stats->add_option("--json", json_out, "Also write the statistics as JSON");
    stats->callback([&] {
        action = [&] {
            const auto records = data::read_records(data_file);
            const auto lexicon =
                data::ProfanityLexicon::load(lexicon_file, std::set<std::string>(ambiguous.begin(), ambiguous.end()));
            const auto s = data::dataset_stats(records, lexicon);
            std::cout << data::format_table(s);
            if (!json_out.empty()) {
                auto m = start_manifest("stats", seed);
                m.inputs = {data_file, lexicon_file};
                m.config = {{"ambiguous", ambiguous}};
                emit_artifact(json_out, data::to_json(s).dump(2) + "\n", m);
            }
            return 0;
        };
    });

    // split
    double test_fraction = 0.1, threshold = data::kDefaultSplitThreshold;
    std::string verify_file, train_out, test_out;
    auto* split = command("split", "Train/test split with no cross pair above a tf-idf similarity threshold");
    split->add_option("--data", data_file)->required()->check(CLI::ExistingFile);
    split->add_option("--test-fraction", test_fraction)->capture_default_str();
    split->add_option("--threshold", threshold)->capture_default_str();
    split->add_option("--out", out, "Split file (indices)");
    split->add_option("--train-out", train_out, "Train records (JSONL)");
    split->add_option("--test-out", test_out, "Test records (JSONL)");
    split->add_option("--verify", verify_file, "Check an existing split file instead")->check(CLI::ExistingFile);
    split->callback([&] {
        action = [&] {
            const auto records = data::read_records(data_file);
            const auto texts = generations(records);
            if (!verify_file.empty()) {
                const auto s = data::split_from_json(read_json(verify_file));
                const auto idf = data::IdfTable::build(texts);
                std::vector<bool> seen(texts.size(), false);
                for (const auto* part : {&s.train, &s.test, &s.dropped}) {
                    for (auto i : *part) {
                        require(i < texts.size(), "split index " + std::to_string(i) + " out of range");
                        require(!seen[i], "split index " + std::to_string(i) + " appears twice");
                        seen[i] = true;
                    }
                }
                const double worst = data::max_cross_similarity(texts, s.train, s.test, idf);
                const bool ok = worst <= s.threshold + 1e-12;
                std::cout << json{{"verified", ok}, {"max_cross_similarity", worst}, {"threshold", s.threshold}}.dump()
                          << "\n";
                if (!ok) fail(ErrorCode::validation, "split violates its similarity threshold");
                return 0;
            }
            require(!out.empty() && out != "-", "split needs --out");
            auto m = start_manifest("split", seed);
            m.inputs = {data_file};
            m.config = {{"test_fraction", test_fraction}, {"threshold", threshold}};
            Rng rng(seed);
            data::SplitResult s;
            try {
                s = data::make_split(texts, test_fraction, threshold, rng);
            } catch (const data::SplitInfeasible& e) {
                const auto partial = out + ".partial.json";
                write_json(partial, data::to_json(e.partial()));
                spdlog::error("only {:.4f} of the records can go to test; partial split in {}", e.achieved_fraction(),
                              partial);
                throw;
            }
            if (!train_out.empty()) {
                data::write_records(train_out, data::select(records, s.train));
                m.outputs.push_back(train_out);
            }
            if (!test_out.empty()) {
                data::write_records(test_out, data::select(records, s.test));
                m.outputs.push_back(test_out);
            }
            emit_artifact(out, data::to_json(s).dump() + "\n", m);
            spdlog::info("train {} / test {} / dropped {}; max cross similarity {:.4f}", s.train.size(),
                         s.test.size(), s.dropped.size(), s.max_cross_similarity);
            return 0;
        };
    });

    // balance
    auto* balance = command("balance", "Downsample so every group has equal toxic and benign counts");
    balance->add_option("--data", data_file)->required()->check(CLI::ExistingFile);
    balance->add_option("--out", out, "Balanced JSONL")->required();
    balance->callback([&] {
        action = [&] {
            const auto records = data::read_records(data_file);
            Rng rng(seed);
            const auto b = data::enforce_balance(records, rng);
            for (const auto& w : b.warnings) spdlog::warn("{}", w);
            auto m = start_manifest("balance", seed);
            m.inputs = {data_file};
            m.config = {{"excluded_groups", b.excluded}};
            emit_artifact(out, data::records_to_jsonl(data::select(records, b.kept)), m);
            spdlog::info("kept {} of {} records", b.kept.size(), records.size());
            return 0;
        };
    });

    // agree
    std::string annotations_file;
    auto* agree = command("agree", "Inter-annotator agreement and aggregate label rates");
    agree->add_option("--annotations", annotations_file, "CSV or JSONL annotations")
        ->required()
        ->check(CLI::ExistingFile);
    agree->add_option("--json", json_out, "Write the report here instead of stdout");
    agree->callback([&] {
        action = [&] {
            const auto anns = annot::read_annotations(annotations_file);
            const auto report = annot::agreement_report(anns).dump(2) + "\n";
            if (json_out.empty()) {
                std::cout << report;
            } else {
                auto m = start_manifest("agree", seed);
                m.inputs = {annotations_file};
                emit_artifact(json_out, report, m);
            }
            return 0;
        };
    });

    // eval
    auto* eval = app.add_subcommand("eval", "Classifier evaluation");
    eval->require_subcommand(1);
    std::string eval_file, manifest_file, base_file;
    double fool_threshold = eval::kFoolThreshold, contamination = 0.7;

    auto* auc = command("auc", "ROC AUC of a classifier on a {text, label} JSONL set", eval);
    auc->add_option("--clf", clf_file)->required()->check(CLI::ExistingFile);
    auc->add_option("--eval", eval_file)->required()->check(CLI::ExistingFile);
    auc->callback([&] {
        action = [&] {
            const auto model = clf::LinearClassifier::load(clf_file);
            const auto set = eval::load_eval_set(fs::path(eval_file).stem().string(), eval_file);
            std::cout << json{{"eval_set", set.name}, {"auc", eval::evaluate_auc(model, set)}}.dump() << "\n";
            return 0;
        };
    });

    auto* compare = command("compare", "Human-judged comparison of ALICE and top-k generations", eval);
    compare->add_option("--data", data_file)->required()->check(CLI::ExistingFile);
    compare->add_option("--annotations", annotations_file)->required()->check(CLI::ExistingFile);
    compare->add_option("--clf", clf_file, "Score generations with this classifier")->check(CLI::ExistingFile);
    compare->add_option("--threshold", fool_threshold)->capture_default_str();
    compare->add_option("--json", json_out);
    compare->callback([&] {
        action = [&] {
            const auto records = data::read_records(data_file);
            const auto joined = eval::join_annotations(records, annot::read_annotations(annotations_file));
            std::optional<clf::LinearClassifier> model;
            if (!clf_file.empty()) model = clf::LinearClassifier::load(clf_file);
            const auto r = eval::compare_methods(joined.records, joined.human, model ? &*model : nullptr, fool_threshold);
            std::cout << eval::format_table(r);
            if (!json_out.empty()) {
                auto m = start_manifest("eval compare", seed);
                m.inputs = {data_file, annotations_file};
                m.config = {{"threshold", fool_threshold}};
                emit_artifact(json_out, eval::to_json(r).dump(2) + "\n", m);
            }
            return 0;
        };
    });

    auto add_finetune_flags = [&](CLI::App* sub) {
        sub->add_option("--base", base_file, "Classifier to fine-tune")->required()->check(CLI::ExistingFile);
        sub->add_option("--data", data_file, "Generated records (prompt label is the target)")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--eval-manifest", manifest_file, "JSON {name: path} of eval sets")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--epochs", epochs)->capture_default_str();
        sub->add_option("--lr", lr)->capture_default_str();
        sub->add_option("--l2", l2)->capture_default_str();
        sub->add_option("--contamination", contamination, "Max train/eval similarity")->capture_default_str();
        sub->add_option("--json", json_out);
    };
    auto finetune_options = [&] {
        eval::FinetuneOptions o;
        o.meta = train_meta(epochs, lr, l2, seed);
        o.contamination_threshold = contamination;
        return o;
    };

    auto* finetune = command("finetune", "Fine-tune on generations and report AUC before and after", eval);
    add_finetune_flags(finetune);
    finetune->add_option("--out", out, "Fine-tuned classifier");
    finetune->callback([&] {
        action = [&] {
            const auto base = clf::LinearClassifier::load(base_file);
            const auto records = data::read_records(data_file);
            const auto sets = eval::load_eval_manifest(manifest_file);
            const auto r = eval::finetune_and_eval(base, records, sets, finetune_options());
            std::cout << eval::format_table(r);
            auto m = start_manifest("eval finetune", seed);
            m.inputs = {base_file, data_file, manifest_file};
            m.config = {{"epochs", epochs}, {"learning_rate", lr}, {"l2", l2}, {"contamination", contamination}};
            if (!out.empty() && out != "-") {
                r.model.save(out);
                m.outputs.push_back(out);
                write_manifest(out, m);
            }
            if (!json_out.empty()) emit_artifact(json_out, eval::to_json(r).dump(2) + "\n", m);
            return 0;
        };
    });

    auto* ablation = command("ablation", "None / ALICE / top-k / combined fine-tuning table", eval);
    add_finetune_flags(ablation);
    ablation->callback([&] {
        action = [&] {
            const auto base = clf::LinearClassifier::load(base_file);
            const auto records = data::read_records(data_file);
            const auto sets = eval::load_eval_manifest(manifest_file);
            Rng rng(seed);
            const auto t = eval::finetune_ablation(base, records, sets, finetune_options(), rng);
            std::cout << eval::format_table(t);
            if (!json_out.empty()) {
                auto m = start_manifest("eval ablation", seed);
                m.inputs = {base_file, data_file, manifest_file};
                m.config = {{"epochs", epochs}, {"learning_rate", lr}, {"l2", l2}, {"contamination", contamination}};
                emit_artifact(json_out, eval::to_json(t).dump(2) + "\n", m);
            }
            return 0;
        };
    });

    // perplexity
    double cutoff = eval::kPerplexityCutoff;
    auto* perplexity = command("perplexity", "Mean generation perplexity per group and method");
    perplexity->add_option("--lm", lm_file)->required()->check(CLI::ExistingFile);
    perplexity->add_option("--data", data_file)->required()->check(CLI::ExistingFile);
    perplexity->add_option("--cutoff", cutoff, "Drop generations above this perplexity")->capture_default_str();
    perplexity->add_option("--json", json_out);
    perplexity->callback([&] {
        action = [&] {
            const auto model = lm::NGramModel::load(lm_file);
            const auto rows = eval::perplexity_report(model, data::read_records(data_file), cutoff);
            std::cout << eval::format_table(rows, cutoff);
            if (!json_out.empty()) {
                auto m = start_manifest("perplexity", seed);
                m.inputs = {lm_file, data_file};
                m.config = {{"cutoff", cutoff}};
                emit_artifact(json_out, eval::to_json(rows, cutoff).dump(2) + "\n", m);
            }
            return 0;
        };
    });

    // mentions
    std::string terms_file;
    auto* mentions = command("mentions", "Share of generations naming their target group (lexicon proxy)");
    mentions->add_option("--data", data_file)->required()->check(CLI::ExistingFile);
    mentions->add_option("--terms", terms_file, "JSON {group: [terms]}")->required()->check(CLI::ExistingFile);
    mentions->add_option("--json", json_out);
    mentions->callback([&] {
        action = [&] {
            const auto r = eval::group_mention_rate(data::read_records(data_file), eval::load_group_terms(terms_file));
            for (const auto& w : r.warnings) spdlog::warn("{}", w);
            std::cout << eval::format_table(r);
            if (!json_out.empty()) {
                auto m = start_manifest("mentions", seed);
                m.inputs = {data_file, terms_file};
                emit_artifact(json_out, eval::to_json(r).dump(2) + "\n", m);
            }
            return 0;
        };
    });

    // serve
    std::string config_file, host;
    int port = -1;
    auto* serve_cmd = command("serve", "Run the curation and generation HTTP gateway");
    serve_cmd->add_option("--config", config_file)->required()->check(CLI::ExistingFile);
    serve_cmd->add_option("--host", host, "Override the configured host");
    serve_cmd->add_option("--port", port, "Override the configured port (0 picks a free one)");
    serve_cmd->callback([&] {
        action = [&] {
            auto config = gateway::ServiceConfig::load(config_file);
            if (!host.empty()) config.host = host;
            if (port >= 0) config.port = port;
            return serve(config);
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << e.what() << "\n\n" << app.help();
        return 1;
    }
    if (quiet) spdlog::set_level(spdlog::level::warn);

    try {
        return action();
    } catch (const Error& e) {
        spdlog::error("{}: {}", error_code_name(e.code()), e.what());
        return e.is_validation() ? 1 : 2;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return 2;
    }
}
