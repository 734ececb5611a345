#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "advgen/core/io.hpp"

namespace advgen::annot {

enum class Author { human, ai };
enum class Intent { benign, unsure, harm };
enum class Claim { fact, opinion, neither };
enum class ToxicityClass { non_toxic, ambiguous, toxic };

std::string_view author_name(Author a) noexcept;
std::string_view intent_name(Intent i) noexcept;
std::string_view claim_name(Claim c) noexcept;
std::string_view toxicity_class_name(ToxicityClass c) noexcept;

/// Framing tags seen in the annotation guidelines; replace via config.
const std::set<std::string>& default_framing_tags();

/// One annotator's answers for one item.
struct AnnotationRecord {
    std::string item_id;
    std::string annotator_id;
    Author human_or_ai = Author::human;
    int harmful_if_ai = 1;
    int harmful_if_human = 1;
    Intent harmful_intent = Intent::benign;
    bool pos_stereo = false;
    bool lewd = false;
    std::vector<std::string> which_group;
    std::set<std::string> group_framing;
    Claim fact_or_opinion = Claim::neither;

    /// Scores in 1..5 and framing tags within `framing_tags`.
    void validate(const std::set<std::string>& framing_tags = default_framing_tags()) const;

    json to_json() const;
    friend bool operator==(const AnnotationRecord&, const AnnotationRecord&) = default;
};

/// max(harmfulIfAI, harmfulIfHuman): below 3 non-toxic, 3 ambiguous, above 3 toxic.
ToxicityClass toxicity_class(int harmful_if_ai, int harmful_if_human);
ToxicityClass toxicity_class(const AnnotationRecord& r);
int max_score(const AnnotationRecord& r);

/// Field names are the question ids (humanOrAI, harmfulIfAI, ...), plus
/// item_id and annotator_id. List fields are JSON arrays, or ';'-separated
/// strings in CSV.
AnnotationRecord annotation_from_json(const json& row,
                                      const std::set<std::string>& framing_tags = default_framing_tags());
std::vector<AnnotationRecord> parse_annotations_csv(std::string_view text,
                                                    const std::set<std::string>& framing_tags = default_framing_tags());
std::vector<AnnotationRecord> parse_annotations_jsonl(std::string_view text,
                                                      const std::set<std::string>& framing_tags = default_framing_tags());

/// Dispatches on the extension (.csv, otherwise JSONL).
std::vector<AnnotationRecord> read_annotations(const std::filesystem::path& path,
                                               const std::set<std::string>& framing_tags = default_framing_tags());

}  // namespace advgen::annot
