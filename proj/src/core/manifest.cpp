#include "advgen/core/manifest.hpp"

#include <chrono>
#include <ctime>

#include "advgen/core/error.hpp"

namespace advgen {

json RunManifest::to_json() const {
    return {{"command", command},   {"config", config},         {"seeds", seeds},
            {"inputs", inputs},     {"outputs", outputs},       {"version", version},
            {"started_at", started_at}, {"finished_at", finished_at}};
}

RunManifest RunManifest::from_json(const json& j) {
    try {
        RunManifest m;
        m.command = j.at("command").get<std::string>();
        m.config = j.value("config", json::object());
        m.seeds = j.value("seeds", std::vector<std::uint64_t>{});
        m.inputs = j.value("inputs", std::vector<std::string>{});
        m.outputs = j.value("outputs", std::vector<std::string>{});
        m.version = j.value("version", std::string());
        m.started_at = j.value("started_at", std::string());
        m.finished_at = j.value("finished_at", std::string());
        return m;
    } catch (const json::exception& e) {
        fail(ErrorCode::validation, std::string("bad run manifest: ") + e.what());
    }
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::filesystem::path manifest_path(const std::filesystem::path& artifact) {
    auto p = artifact;
    p += ".manifest.json";
    return p;
}

void write_manifest(const std::filesystem::path& artifact, RunManifest manifest) {
    manifest.finished_at = utc_timestamp();
    write_json(manifest_path(artifact), manifest.to_json());
}

}  // namespace advgen
