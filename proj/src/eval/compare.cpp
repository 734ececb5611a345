#include "advgen/eval/compare.hpp"

#include <map>
#include <sstream>

#include <fmt/format.h>

#include "advgen/annot/agreement.hpp"
#include "advgen/core/error.hpp"

namespace advgen::eval {

namespace {

double ratio(std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ComparisonReport compare_methods(std::span<const data::GenerationRecord> records, std::span<const HumanJudgment> human,
                                 const clf::ToxicityClassifier* classifier, double threshold) {
    require(records.size() == human.size(), "every record needs a human judgment");
    using annot::ToxicityClass;

    struct Acc {
        std::size_t n = 0, toxic = 0, benign = 0, match_toxic = 0, match_benign = 0, fooled = 0, fool_den = 0;
        double score = 0, score_toxic = 0, score_benign = 0;
    };
    std::map<data::GenerationMethod, Acc> acc;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        const auto& h = human[i];
        auto& a = acc[r.method];
        ++a.n;
        a.score += h.toxicity_score;
        if (r.prompt_label == Label::toxic) {
            ++a.toxic;
            a.match_toxic += h.toxicity == ToxicityClass::toxic;
            a.score_toxic += h.toxicity_score;
        } else {
            ++a.benign;
            a.match_benign += h.toxicity == ToxicityClass::non_toxic;
            a.score_benign += h.toxicity_score;
        }
        if (h.toxicity == ToxicityClass::ambiguous) continue;
        double p = 0.0;
        if (classifier != nullptr) {
            p = classifier->toxicity_prob(r.generation);
        } else {
            if (!r.classifier_prediction) {
                fail(ErrorCode::validation, "record has no classifier_prediction and no classifier was given");
            }
            p = *r.classifier_prediction;
        }
        const bool predicted_toxic = p >= threshold;
        ++a.fool_den;
        a.fooled += predicted_toxic != (h.toxicity == ToxicityClass::toxic);
    }

    ComparisonReport report;
    report.threshold = threshold;
    for (auto m : {data::GenerationMethod::alice, data::GenerationMethod::top_k}) {
        auto it = acc.find(m);
        if (it == acc.end()) continue;
        const auto& a = it->second;
        MethodStats s;
        s.method = std::string(data::method_name(m));
        s.records = a.n;
        s.toxic_prompts = a.toxic;
        s.benign_prompts = a.benign;
        s.label_match_rate_toxic = ratio(a.match_toxic, a.toxic);
        s.label_match_rate_benign = ratio(a.match_benign, a.benign);
        s.fool_rate = ratio(a.fooled, a.fool_den);
        s.fool_denominator = a.fool_den;
        s.mean_human_toxicity = a.score / static_cast<double>(a.n);
        s.mean_human_toxicity_toxic_prompt = a.toxic == 0 ? 0.0 : a.score_toxic / static_cast<double>(a.toxic);
        s.mean_human_toxicity_benign_prompt = a.benign == 0 ? 0.0 : a.score_benign / static_cast<double>(a.benign);
        report.methods.push_back(s);
    }
    return report;
}

JoinedJudgments join_annotations(std::span<const data::GenerationRecord> records,
                                 std::span<const annot::AnnotationRecord> annotations) {
    JoinedJudgments out;
    for (const auto& item : annot::aggregate_labels(annotations)) {
        std::size_t idx = 0;
        std::size_t used = 0;
        try {
            idx = std::stoul(item.item_id, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.item_id.size() || idx >= records.size()) {
            fail(ErrorCode::validation, "annotation item_id '" + item.item_id + "' is not a record line number");
        }
        out.records.push_back(records[idx]);
        out.human.push_back({item.toxicity, item.mean_max_score});
    }
    return out;
}

json to_json(const ComparisonReport& r) {
    json methods = json::array();
    for (const auto& s : r.methods) {
        methods.push_back({{"method", s.method},
                           {"records", s.records},
                           {"toxic_prompts", s.toxic_prompts},
                           {"benign_prompts", s.benign_prompts},
                           {"label_match_rate_toxic", s.label_match_rate_toxic},
                           {"label_match_rate_benign", s.label_match_rate_benign},
                           {"fool_rate", s.fool_rate},
                           {"fool_denominator", s.fool_denominator},
                           {"mean_human_toxicity", s.mean_human_toxicity},
                           {"mean_human_toxicity_toxic_prompt", s.mean_human_toxicity_toxic_prompt},
                           {"mean_human_toxicity_benign_prompt", s.mean_human_toxicity_benign_prompt}});
    }
    return {{"threshold", r.threshold}, {"methods", methods}};
}

std::string format_table(const ComparisonReport& r) {
    std::ostringstream out;
    out << fmt::format("{:<8} {:>7} {:>12} {:>12} {:>9} {:>10} {:>10}\n", "method", "records", "match(tox)",
                       "match(ben)", "fool", "tox|toxic", "tox|benign");
    for (const auto& s : r.methods) {
        out << fmt::format("{:<8} {:>7} {:>12.3f} {:>12.3f} {:>9.3f} {:>10.2f} {:>10.2f}\n", s.method, s.records,
                           s.label_match_rate_toxic, s.label_match_rate_benign, s.fool_rate,
                           s.mean_human_toxicity_toxic_prompt, s.mean_human_toxicity_benign_prompt);
    }
    out << fmt::format("fool threshold {:.2f}; human-ambiguous items excluded from the fool rate\n", r.threshold);
    return out.str();
}

}  // namespace advgen::eval
