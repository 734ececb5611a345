#include "advgen/data/record.hpp"

#include <algorithm>

#include "advgen/core/error.hpp"

namespace advgen::data {

std::string_view method_name(GenerationMethod m) noexcept { return m == GenerationMethod::alice ? "alice" : "top-k"; }

GenerationMethod parse_method(std::string_view s) {
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "alice") return GenerationMethod::alice;
    if (lower == "top-k" || lower == "topk" || lower == "top_k") return GenerationMethod::top_k;
    fail(ErrorCode::validation, "unknown generation method '" + std::string(s) + "'");
}

json to_json(const GenerationRecord& r) {
    json j{{"prompt", r.prompt},
           {"generation", r.generation},
           {"generation_method", method_name(r.method)},
           {"prompt_label", label_value(r.prompt_label)},
           {"group", r.group}};
    if (r.classifier_prediction) j["classifier_prediction"] = *r.classifier_prediction;
    if (r.decoding) j["decoding"] = *r.decoding;
    return j;
}

GenerationRecord record_from_json(const json& row) {
    try {
        GenerationRecord r;
        r.prompt = row.value("prompt", std::string());
        r.generation = row.at("generation").get<std::string>();
        r.method = parse_method(row.at("generation_method").get<std::string>());
        const auto& label = row.at("prompt_label");
        r.prompt_label = label.is_string() ? parse_label(label.get<std::string>()) : label_from_int(label.get<int>());
        r.group = row.at("group").get<std::string>();
        for (const char* key : {"classifier_prediction", "roberta_prediction"}) {
            if (row.contains(key) && !row.at(key).is_null()) {
                r.classifier_prediction = row.at(key).get<double>();
                break;
            }
        }
        if (row.contains("decoding")) r.decoding = row.at("decoding").get<std::string>();
        return r;
    } catch (const json::exception& e) {
        fail(ErrorCode::validation, std::string("bad generation record: ") + e.what());
    }
}

std::vector<GenerationRecord> parse_records(std::string_view jsonl) {
    std::vector<GenerationRecord> out;
    for (const auto& row : parse_jsonl(jsonl)) out.push_back(record_from_json(row));
    return out;
}

std::vector<GenerationRecord> read_records(const std::filesystem::path& path) {
    std::vector<GenerationRecord> out;
    std::size_t line = 0;
    for (const auto& row : read_jsonl(path)) {
        ++line;
        try {
            out.push_back(record_from_json(row));
        } catch (const Error& e) {
            fail(e.code(), path.string() + " row " + std::to_string(line) + ": " + e.what());
        }
    }
    return out;
}

std::string records_to_jsonl(const std::vector<GenerationRecord>& records) {
    std::string out;
    for (const auto& r : records) {
        out += to_json(r).dump();
        out += '\n';
    }
    return out;
}

void write_records(const std::filesystem::path& path, const std::vector<GenerationRecord>& records) {
    write_text(path, records_to_jsonl(records));
}

}  // namespace advgen::data
