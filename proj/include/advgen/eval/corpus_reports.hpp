#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "advgen/core/io.hpp"
#include "advgen/data/record.hpp"
#include "advgen/lm/ngram_model.hpp"

namespace advgen::eval {

inline constexpr double kPerplexityCutoff = 500.0;

struct PerplexityRow {
    std::string group;
    std::string method;
    std::size_t count = 0;    // kept
    std::size_t dropped = 0;  // above the cutoff or empty
    double mean = 0.0;
};

/// Per-(group, method) mean perplexity of the generations, dropping values
/// above the cutoff. Groups whose generations are all dropped report count 0.
std::vector<PerplexityRow> perplexity_report(const lm::NGramModel& model,
                                             std::span<const data::GenerationRecord> records,
                                             double cutoff = kPerplexityCutoff);

struct MentionRow {
    std::string group;
    std::string method;
    std::size_t count = 0;
    std::size_t mentions = 0;
    double rate = 0.0;
};

struct MentionReport {
    std::vector<MentionRow> rows;
    std::vector<std::string> warnings;  // groups without a lexicon
};

/// Share of generations containing a whole-word term from their own group's
/// lexicon. This is a lexicon proxy, not a human judgment.
MentionReport group_mention_rate(std::span<const data::GenerationRecord> records,
                                 const std::map<std::string, std::vector<std::string>>& group_terms);

/// {"group": ["term", ...], ...}
std::map<std::string, std::vector<std::string>> load_group_terms(const std::filesystem::path& path);

json to_json(const std::vector<PerplexityRow>& rows, double cutoff);
json to_json(const MentionReport& r);
std::string format_table(const std::vector<PerplexityRow>& rows, double cutoff);
std::string format_table(const MentionReport& r);

}  // namespace advgen::eval
