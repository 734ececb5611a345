#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "advgen/core/io.hpp"
#include "advgen/data/lexicon.hpp"
#include "advgen/data/record.hpp"

namespace advgen::data {

struct StatsRow {
    std::string key;          // group, method name, or "total"
    std::string label;        // "toxic"/"benign", empty for aggregate rows
    std::size_t count = 0;
    double mean_chars = 0.0;
    double std_chars = 0.0;   // population standard deviation
    double implicit_pct = 0.0;
};

struct DatasetStats {
    std::vector<StatsRow> by_group_label;  // sorted by (group, label)
    std::vector<StatsRow> by_method;
    StatsRow total;
};

/// Unicode code points in a UTF-8 string (continuation bytes are not counted).
std::size_t char_count(std::string_view utf8) noexcept;

DatasetStats dataset_stats(std::span<const GenerationRecord> records, const ProfanityLexicon& lexicon);

json to_json(const DatasetStats& s);
std::string format_table(const DatasetStats& s);

}  // namespace advgen::data
