#include "advgen/core/journal.hpp"

#include <unistd.h>

#include "advgen/core/error.hpp"

namespace advgen {

AppendLog::AppendLog(std::filesystem::path path) : path_(std::move(path)) {
    if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
    // Drop a torn final line so new entries start on a fresh line.
    if (std::filesystem::exists(path_)) {
        const std::string text = read_text(path_);
        if (!text.empty() && text.back() != '\n') {
            const auto keep = text.rfind('\n');
            std::filesystem::resize_file(path_, keep == std::string::npos ? 0 : keep + 1);
        }
    }
    file_ = std::fopen(path_.c_str(), "ab");
    if (file_ == nullptr) fail(ErrorCode::io, "cannot open journal " + path_.string());
}

AppendLog::~AppendLog() {
    if (file_ != nullptr) std::fclose(file_);
}

void AppendLog::append(const json& entry) {
    const std::string line = entry.dump() + "\n";
    std::lock_guard lock(mu_);
    if (std::fwrite(line.data(), 1, line.size(), file_) != line.size() || std::fflush(file_) != 0) {
        fail(ErrorCode::io, "journal write failed: " + path_.string());
    }
    ::fsync(::fileno(file_));
}

AppendLog::Contents AppendLog::read(const std::filesystem::path& path) {
    Contents out;
    if (!std::filesystem::exists(path)) return out;
    const std::string text = read_text(path);
    std::size_t start = 0;
    std::size_t line_no = 0;
    while (start < text.size()) {
        ++line_no;
        const std::size_t end = text.find('\n', start);
        const bool terminated = end != std::string::npos;
        const std::string line = text.substr(start, (terminated ? end : text.size()) - start);
        start = terminated ? end + 1 : text.size();
        if (!terminated) {
            // Entries are written with their newline in one call.
            out.torn_tail = true;
            break;
        }
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.entries.push_back(json::parse(line));
        } catch (const json::parse_error& e) {
            fail(ErrorCode::validation, path.string() + " line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace advgen
