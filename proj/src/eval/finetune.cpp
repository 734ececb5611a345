#include "advgen/eval/finetune.hpp"

#include <sstream>

#include <fmt/format.h>

#include "advgen/core/error.hpp"
#include "advgen/data/similarity.hpp"

namespace advgen::eval {

namespace {

std::vector<clf::LabeledText> as_training(std::span<const data::GenerationRecord> records) {
    std::vector<clf::LabeledText> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back({r.generation, r.prompt_label, 1.0});
    return out;
}

std::vector<data::GenerationRecord> sample(std::vector<data::GenerationRecord> records, std::size_t n, Rng& rng) {
    if (records.size() > n) {
        rng.shuffle(std::span(records));
        records.resize(n);
    }
    return records;
}

}  // namespace

EvalSet load_eval_set(const std::string& name, const std::filesystem::path& path) {
    EvalSet set{name, {}};
    std::size_t line = 0;
    for (const auto& row : read_jsonl(path)) {
        ++line;
        try {
            const auto& label = row.at("label");
            const Label gold = label.is_number() ? label_from_int(label.get<int>()) : parse_label(label.get<std::string>());
            set.examples.push_back({row.at("text").get<std::string>(), gold, 0.0});
        } catch (const json::exception& e) {
            fail(ErrorCode::validation, path.string() + " row " + std::to_string(line) + ": " + e.what());
        }
    }
    return set;
}

std::vector<EvalSet> load_eval_manifest(const std::filesystem::path& manifest) {
    const json j = read_json(manifest);
    require(j.is_object() && !j.empty(), "eval manifest must map names to JSONL paths");
    std::vector<EvalSet> sets;
    for (const auto& [name, path] : j.items()) {
        std::filesystem::path p = path.get<std::string>();
        if (p.is_relative()) p = manifest.parent_path() / p;
        sets.push_back(load_eval_set(name, p));
    }
    return sets;
}

double evaluate_auc(const clf::ToxicityClassifier& model, const EvalSet& set) {
    std::vector<double> scores;
    std::vector<Label> gold;
    for (const auto& e : set.examples) {
        scores.push_back(model.toxicity_prob(e.text));
        gold.push_back(e.gold);
    }
    return roc_auc(scores, gold);
}

void check_contamination(std::span<const data::GenerationRecord> train, std::span<const EvalSet> eval_sets,
                         double threshold) {
    std::vector<std::string> train_texts;
    for (const auto& r : train) train_texts.push_back(r.generation);
    for (const auto& set : eval_sets) {
        std::vector<std::string> eval_texts;
        for (const auto& e : set.examples) eval_texts.push_back(e.text);
        if (auto hit = data::find_similar_pair(train_texts, eval_texts, threshold)) {
            fail(ErrorCode::contamination, "eval set '" + set.name + "' example " + std::to_string(hit->b) +
                                               " has similarity " + fmt::format("{:.3f}", hit->similarity) +
                                               " to training record " + std::to_string(hit->a));
        }
    }
}

FinetuneResult finetune_and_eval(const clf::LinearClassifier& base, std::span<const data::GenerationRecord> train,
                                 std::span<const EvalSet> eval_sets, const FinetuneOptions& options) {
    check_contamination(train, eval_sets, options.contamination_threshold);
    const auto data = as_training(train);
    FinetuneResult r{train.size(), {}, clf::train_classifier(data, options.meta, &base, base.space())};
    for (const auto& set : eval_sets) {
        r.rows.push_back({set.name, set.examples.size(), evaluate_auc(base, set), evaluate_auc(r.model, set)});
    }
    return r;
}

AblationTable finetune_ablation(const clf::LinearClassifier& base, std::span<const data::GenerationRecord> records,
                                std::span<const EvalSet> eval_sets, const FinetuneOptions& options, Rng& rng) {
    check_contamination(records, eval_sets, options.contamination_threshold);
    std::vector<data::GenerationRecord> alice, topk;
    for (const auto& r : records) (r.method == data::GenerationMethod::alice ? alice : topk).push_back(r);
    require(!alice.empty() && !topk.empty(), "ablation needs both ALICE and top-k records");
    const std::size_t n = std::min(alice.size(), topk.size());
    alice = sample(std::move(alice), n, rng);
    topk = sample(std::move(topk), n, rng);
    auto combined = alice;
    combined.insert(combined.end(), topk.begin(), topk.end());

    AblationTable t;
    std::vector<clf::LinearClassifier> models{base};
    for (const auto* subset : {&alice, &topk, &combined}) {
        models.push_back(clf::train_classifier(as_training(*subset), options.meta, &base, base.space()));
    }
    t.train_sizes = {0, alice.size(), topk.size(), combined.size()};
    for (const auto& set : eval_sets) {
        t.eval_sets.push_back(set.name);
        std::vector<double> row;
        for (const auto& m : models) row.push_back(evaluate_auc(m, set));
        t.auc.push_back(std::move(row));
    }
    return t;
}

json to_json(const FinetuneResult& r) {
    json rows = json::array();
    for (const auto& row : r.rows) {
        rows.push_back({{"eval_set", row.eval_set}, {"examples", row.examples}, {"auc_before", row.before},
                        {"auc_after", row.after}});
    }
    return {{"train_size", r.train_size}, {"rows", rows}};
}

json to_json(const AblationTable& t) {
    json rows = json::array();
    for (std::size_t i = 0; i < t.eval_sets.size(); ++i) {
        json auc = json::object();
        for (std::size_t c = 0; c < t.columns.size(); ++c) auc[t.columns[c]] = t.auc[i][c];
        rows.push_back({{"eval_set", t.eval_sets[i]}, {"auc", auc}});
    }
    return {{"columns", t.columns}, {"train_sizes", t.train_sizes}, {"rows", rows}};
}

std::string format_table(const FinetuneResult& r) {
    std::ostringstream out;
    out << fmt::format("{:<24} {:>8} {:>8} {:>8}\n", "eval set", "n", "before", "after");
    for (const auto& row : r.rows) {
        out << fmt::format("{:<24} {:>8} {:>8.4f} {:>8.4f}\n", row.eval_set, row.examples, row.before, row.after);
    }
    out << fmt::format("train size {}\n", r.train_size);
    return out.str();
}

std::string format_table(const AblationTable& t) {
    std::ostringstream out;
    out << fmt::format("{:<24}", "eval set / finetune data");
    for (const auto& c : t.columns) out << fmt::format(" {:>14}", c);
    out << "\n" << fmt::format("{:<24}", "(train size)");
    for (auto s : t.train_sizes) out << fmt::format(" {:>14}", s);
    out << "\n";
    for (std::size_t i = 0; i < t.eval_sets.size(); ++i) {
        out << fmt::format("{:<24}", t.eval_sets[i]);
        for (double a : t.auc[i]) out << fmt::format(" {:>14.4f}", a);
        out << "\n";
    }
    return out.str();
}

}  // namespace advgen::eval
