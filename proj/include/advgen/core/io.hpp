#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace advgen {

using json = nlohmann::json;

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

/// Lines without terminators; a trailing empty line is dropped and CR before LF
/// is stripped.
std::vector<std::string> read_lines(const std::filesystem::path& path);

json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& value);

/// Blank lines are skipped; a malformed line raises a validation error naming
/// the line number.
std::vector<json> read_jsonl(const std::filesystem::path& path);
std::vector<json> parse_jsonl(std::string_view text);
std::string to_jsonl(const std::vector<json>& rows);

/// Minimal RFC 4180 reader: quoted fields, doubled quotes, embedded newlines.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

}  // namespace advgen
