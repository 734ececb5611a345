#include "advgen/annot/record.hpp"

#include <algorithm>
#include <map>

#include "advgen/core/error.hpp"

namespace advgen::annot {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

Author parse_author(std::string_view s) {
    const auto v = lower(s);
    if (v == "human") return Author::human;
    if (v == "ai") return Author::ai;
    fail(ErrorCode::validation, "humanOrAI must be human or ai, got '" + std::string(s) + "'");
}

Intent parse_intent(std::string_view s) {
    const auto v = lower(s);
    if (v == "benign") return Intent::benign;
    if (v == "unsure") return Intent::unsure;
    if (v == "harm") return Intent::harm;
    fail(ErrorCode::validation, "harmfulIntent must be benign, unsure or harm, got '" + std::string(s) + "'");
}

Claim parse_claim(std::string_view s) {
    const auto v = lower(s);
    if (v == "fact") return Claim::fact;
    if (v == "opinion") return Claim::opinion;
    if (v == "neither") return Claim::neither;
    fail(ErrorCode::validation, "factOrOpinion must be fact, opinion or neither, got '" + std::string(s) + "'");
}

bool parse_bool(const json& v) {
    if (v.is_boolean()) return v.get<bool>();
    if (v.is_number_integer()) return v.get<int>() != 0;
    const auto s = lower(trim(v.get<std::string>()));
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no" || s.empty()) return false;
    fail(ErrorCode::validation, "not a boolean: '" + s + "'");
}

int parse_score(const json& v) {
    if (v.is_number_integer()) return v.get<int>();
    if (v.is_number()) {
        const double d = v.get<double>();
        require(d == static_cast<int>(d), "scores must be integers");
        return static_cast<int>(d);
    }
    const auto s = trim(v.get<std::string>());
    std::size_t used = 0;
    int x = 0;
    try {
        x = std::stoi(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    require(used == s.size() && !s.empty(), "not an integer score: '" + s + "'");
    return x;
}

std::vector<std::string> parse_list(const json& v) {
    if (v.is_array()) return v.get<std::vector<std::string>>();
    std::vector<std::string> out;
    const auto s = v.get<std::string>();
    std::size_t start = 0;
    while (start <= s.size()) {
        auto end = s.find(';', start);
        if (end == std::string::npos) end = s.size();
        auto item = trim(std::string_view(s).substr(start, end - start));
        if (!item.empty()) out.push_back(std::move(item));
        start = end + 1;
    }
    return out;
}

std::string id_string(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

}  // namespace

std::string_view author_name(Author a) noexcept { return a == Author::human ? "human" : "ai"; }

std::string_view intent_name(Intent i) noexcept {
    switch (i) {
        case Intent::benign: return "benign";
        case Intent::unsure: return "unsure";
        case Intent::harm: return "harm";
    }
    return "?";
}

std::string_view claim_name(Claim c) noexcept {
    switch (c) {
        case Claim::fact: return "fact";
        case Claim::opinion: return "opinion";
        case Claim::neither: return "neither";
    }
    return "?";
}

std::string_view toxicity_class_name(ToxicityClass c) noexcept {
    switch (c) {
        case ToxicityClass::non_toxic: return "non_toxic";
        case ToxicityClass::ambiguous: return "ambiguous";
        case ToxicityClass::toxic: return "toxic";
    }
    return "?";
}

const std::set<std::string>& default_framing_tags() {
    static const std::set<std::string> tags{"direct reference", "indirect reference", "suggests solution",
                                            "moral judgement", "other framing"};
    return tags;
}

void AnnotationRecord::validate(const std::set<std::string>& framing_tags) const {
    for (int s : {harmful_if_ai, harmful_if_human}) {
        require(s >= 1 && s <= 5, "harm scores must be in 1..5, got " + std::to_string(s));
    }
    for (const auto& tag : group_framing) {
        require(framing_tags.count(tag) == 1, "unknown groupFraming tag '" + tag + "'");
    }
}

json AnnotationRecord::to_json() const {
    return {{"item_id", item_id},
            {"annotator_id", annotator_id},
            {"humanOrAI", author_name(human_or_ai)},
            {"harmfulIfAI", harmful_if_ai},
            {"harmfulIfHuman", harmful_if_human},
            {"harmfulIntent", intent_name(harmful_intent)},
            {"posStereo", pos_stereo},
            {"lewd", lewd},
            {"whichGroup", which_group},
            {"groupFraming", group_framing},
            {"factOrOpinion", claim_name(fact_or_opinion)}};
}

ToxicityClass toxicity_class(int harmful_if_ai, int harmful_if_human) {
    for (int s : {harmful_if_ai, harmful_if_human}) {
        require(s >= 1 && s <= 5, "harm scores must be in 1..5, got " + std::to_string(s));
    }
    const int m = std::max(harmful_if_ai, harmful_if_human);
    if (m < 3) return ToxicityClass::non_toxic;
    if (m == 3) return ToxicityClass::ambiguous;
    return ToxicityClass::toxic;
}

ToxicityClass toxicity_class(const AnnotationRecord& r) { return toxicity_class(r.harmful_if_ai, r.harmful_if_human); }

int max_score(const AnnotationRecord& r) { return std::max(r.harmful_if_ai, r.harmful_if_human); }

AnnotationRecord annotation_from_json(const json& row, const std::set<std::string>& framing_tags) {
    try {
        AnnotationRecord r;
        r.item_id = id_string(row.at("item_id"));
        r.annotator_id = id_string(row.at("annotator_id"));
        r.human_or_ai = parse_author(row.at("humanOrAI").get<std::string>());
        r.harmful_if_ai = parse_score(row.at("harmfulIfAI"));
        r.harmful_if_human = parse_score(row.at("harmfulIfHuman"));
        r.harmful_intent = parse_intent(row.at("harmfulIntent").get<std::string>());
        if (row.contains("posStereo")) r.pos_stereo = parse_bool(row.at("posStereo"));
        if (row.contains("lewd")) r.lewd = parse_bool(row.at("lewd"));
        if (row.contains("whichGroup")) r.which_group = parse_list(row.at("whichGroup"));
        if (row.contains("groupFraming")) {
            for (auto& tag : parse_list(row.at("groupFraming"))) r.group_framing.insert(std::move(tag));
        }
        if (row.contains("factOrOpinion")) r.fact_or_opinion = parse_claim(row.at("factOrOpinion").get<std::string>());
        r.validate(framing_tags);
        return r;
    } catch (const json::exception& e) {
        fail(ErrorCode::validation, std::string("bad annotation row: ") + e.what());
    }
}

std::vector<AnnotationRecord> parse_annotations_csv(std::string_view text, const std::set<std::string>& framing_tags) {
    const auto rows = parse_csv(text);
    require(!rows.empty(), "annotation CSV has no header");
    const auto& header = rows.front();
    std::vector<AnnotationRecord> out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.size() == 1 && trim(row[0]).empty()) continue;
        require(row.size() == header.size(), "CSV row " + std::to_string(i + 1) + " has " +
                                                 std::to_string(row.size()) + " fields, header has " +
                                                 std::to_string(header.size()));
        json j = json::object();
        for (std::size_t c = 0; c < header.size(); ++c) j[trim(header[c])] = row[c];
        try {
            out.push_back(annotation_from_json(j, framing_tags));
        } catch (const Error& e) {
            fail(e.code(), "CSV row " + std::to_string(i + 1) + ": " + e.what());
        }
    }
    return out;
}

std::vector<AnnotationRecord> parse_annotations_jsonl(std::string_view text,
                                                      const std::set<std::string>& framing_tags) {
    std::vector<AnnotationRecord> out;
    for (const auto& row : parse_jsonl(text)) out.push_back(annotation_from_json(row, framing_tags));
    return out;
}

std::vector<AnnotationRecord> read_annotations(const std::filesystem::path& path,
                                               const std::set<std::string>& framing_tags) {
    const auto text = read_text(path);
    if (lower(path.extension().string()) == ".csv") return parse_annotations_csv(text, framing_tags);
    return parse_annotations_jsonl(text, framing_tags);
}

}  // namespace advgen::annot
