#pragma once

#include <span>
#include <string>
#include <vector>

#include "advgen/annot/record.hpp"
#include "advgen/clf/classifier.hpp"
#include "advgen/core/io.hpp"
#include "advgen/data/record.hpp"

namespace advgen::eval {

inline constexpr double kFoolThreshold = 0.5;

/// Aggregated human judgment of one generation.
struct HumanJudgment {
    annot::ToxicityClass toxicity = annot::ToxicityClass::ambiguous;
    double toxicity_score = 0.0;  // mean of the 1-5 max scores
};

struct MethodStats {
    std::string method;
    std::size_t records = 0;
    std::size_t toxic_prompts = 0;
    std::size_t benign_prompts = 0;
    double label_match_rate_toxic = 0.0;   // human class toxic, among toxic prompts
    double label_match_rate_benign = 0.0;  // human class non-toxic, among benign prompts
    double fool_rate = 0.0;                // thresholded classifier vs human class
    std::size_t fool_denominator = 0;      // human-ambiguous items are left out
    double mean_human_toxicity = 0.0;
    double mean_human_toxicity_toxic_prompt = 0.0;
    double mean_human_toxicity_benign_prompt = 0.0;
};

struct ComparisonReport {
    std::vector<MethodStats> methods;  // alice, then top-k; methods absent from the input are omitted
    double threshold = kFoolThreshold;
};

/// `human[i]` judges `records[i]`. Classifier probabilities come from
/// `classifier` when given, else from each record's classifier_prediction.
ComparisonReport compare_methods(std::span<const data::GenerationRecord> records,
                                 std::span<const HumanJudgment> human,
                                 const clf::ToxicityClassifier* classifier = nullptr,
                                 double threshold = kFoolThreshold);

/// Joins annotations to records by item_id, which must be the record's
/// 0-based line number. Records without annotations are skipped.
struct JoinedJudgments {
    std::vector<data::GenerationRecord> records;
    std::vector<HumanJudgment> human;
};
JoinedJudgments join_annotations(std::span<const data::GenerationRecord> records,
                                 std::span<const annot::AnnotationRecord> annotations);

json to_json(const ComparisonReport& r);
std::string format_table(const ComparisonReport& r);

}  // namespace advgen::eval
