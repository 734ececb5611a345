#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "advgen/core/io.hpp"
#include "advgen/core/label.hpp"

namespace advgen::data {

enum class GenerationMethod { alice, top_k };

std::string_view method_name(GenerationMethod m) noexcept;  // "alice" / "top-k"

/// Case-insensitive; accepts "alice", "top-k", "topk", "top_k".
GenerationMethod parse_method(std::string_view s);

/// One dataset row. Field names follow the released data; classifier_prediction
/// is read from "roberta_prediction" as well.
struct GenerationRecord {
    std::string prompt;
    std::string generation;
    GenerationMethod method = GenerationMethod::top_k;
    Label prompt_label = Label::benign;
    std::string group;
    std::optional<double> classifier_prediction;
    std::optional<std::string> decoding;  // beam selection used for alice rows

    friend bool operator==(const GenerationRecord&, const GenerationRecord&) = default;
};

json to_json(const GenerationRecord& r);
GenerationRecord record_from_json(const json& row);

std::vector<GenerationRecord> read_records(const std::filesystem::path& path);
std::vector<GenerationRecord> parse_records(std::string_view jsonl);
std::string records_to_jsonl(const std::vector<GenerationRecord>& records);
void write_records(const std::filesystem::path& path, const std::vector<GenerationRecord>& records);

}  // namespace advgen::data
