#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace advgen {

enum class ErrorCode {
    validation,
    configuration,
    no_tokens,          // E_NO_TOKENS
    empty_generation,   // E_EMPTY_GENERATION
    duplicate,          // E_DUPLICATE
    split_infeasible,   // E_SPLIT_INFEASIBLE
    contamination,      // E_CONTAMINATION
    backend,            // E_BACKEND
    protocol,           // E_PROTOCOL
    not_found,
    conflict,
    io,
};

/// Stable wire name of an error code, e.g. "E_NO_TOKENS".
std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

    /// Validation and configuration problems are caller mistakes; the rest are
    /// runtime failures.
    bool is_validation() const noexcept {
        return code_ == ErrorCode::validation || code_ == ErrorCode::configuration;
    }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

inline void require(bool ok, const std::string& what) {
    if (!ok) fail(ErrorCode::validation, what);
}

}  // namespace advgen
