#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "advgen/core/io.hpp"

namespace advgen {

/// Provenance record written next to every artifact a command produces.
struct RunManifest {
    std::string command;
    json config = json::object();
    std::vector<std::uint64_t> seeds;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::string version;
    std::string started_at;   // UTC, ISO 8601
    std::string finished_at;

    json to_json() const;
    static RunManifest from_json(const json& j);
};

/// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

/// <artifact>.manifest.json
std::filesystem::path manifest_path(const std::filesystem::path& artifact);

/// Stamps finished_at and writes the manifest beside `artifact`.
void write_manifest(const std::filesystem::path& artifact, RunManifest manifest);

}  // namespace advgen
