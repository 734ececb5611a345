#pragma once

#include <cstdio>
#include <filesystem>
#include <mutex>
#include <vector>

#include "advgen/core/io.hpp"

namespace advgen {

/// Append-only JSONL file. Each append is written as one line and synced
/// before returning, so a crash can only tear the final line.
class AppendLog {
public:
    explicit AppendLog(std::filesystem::path path);
    ~AppendLog();
    AppendLog(const AppendLog&) = delete;
    AppendLog& operator=(const AppendLog&) = delete;

    void append(const json& entry);
    const std::filesystem::path& path() const noexcept { return path_; }

    struct Contents {
        std::vector<json> entries;
        bool torn_tail = false;  // an unterminated last line was skipped
    };

    /// Missing file reads as empty. A malformed terminated line raises a
    /// validation error.
    static Contents read(const std::filesystem::path& path);

private:
    std::filesystem::path path_;
    std::FILE* file_ = nullptr;
    std::mutex mu_;
};

}  // namespace advgen
