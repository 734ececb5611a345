#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "advgen/clf/classifier.hpp"
#include "advgen/core/io.hpp"
#include "advgen/core/rng.hpp"
#include "advgen/data/record.hpp"
#include "advgen/eval/auc.hpp"

namespace advgen::eval {

struct EvalSet {
    std::string name;
    std::vector<ScoredExample> examples;  // score is filled in by the evaluated model
};

/// JSONL rows {text, label}; label is 0/1 or "benign"/"toxic".
EvalSet load_eval_set(const std::string& name, const std::filesystem::path& path);

/// {"name": "path", ...}; relative paths resolve against the manifest directory.
std::vector<EvalSet> load_eval_manifest(const std::filesystem::path& manifest);

double evaluate_auc(const clf::ToxicityClassifier& model, const EvalSet& set);

struct FinetuneOptions {
    clf::TrainMeta meta;
    double contamination_threshold = 0.7;
};

struct FinetuneRow {
    std::string eval_set;
    std::size_t examples = 0;
    double before = 0.0;
    double after = 0.0;
};

struct FinetuneResult {
    std::size_t train_size = 0;
    std::vector<FinetuneRow> rows;
    clf::LinearClassifier model;
};

/// Raises E_CONTAMINATION when any eval text is more similar than the
/// threshold to a training generation.
void check_contamination(std::span<const data::GenerationRecord> train, std::span<const EvalSet> eval_sets,
                         double threshold);

/// Warm-starts from `base` on the generations with prompt_label as the label
/// and reports AUC per eval set before and after.
FinetuneResult finetune_and_eval(const clf::LinearClassifier& base, std::span<const data::GenerationRecord> train,
                                 std::span<const EvalSet> eval_sets, const FinetuneOptions& options);

/// None / ALICE / top-k / ALICE + top-k. The larger method subset is
/// downsampled (seeded) to the size of the smaller one; the combined column
/// trains on the union of the two equal-sized subsets.
struct AblationTable {
    static constexpr std::size_t kColumns = 4;
    std::vector<std::string> columns{"None", "ALICE", "top-k", "ALICE + top-k"};
    std::vector<std::size_t> train_sizes;  // per column
    std::vector<std::string> eval_sets;
    std::vector<std::vector<double>> auc;  // [eval set][column]
};

AblationTable finetune_ablation(const clf::LinearClassifier& base, std::span<const data::GenerationRecord> records,
                                std::span<const EvalSet> eval_sets, const FinetuneOptions& options, Rng& rng);

json to_json(const FinetuneResult& r);
json to_json(const AblationTable& t);
std::string format_table(const FinetuneResult& r);
std::string format_table(const AblationTable& t);

}  // namespace advgen::eval
