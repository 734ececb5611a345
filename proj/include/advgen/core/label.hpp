#pragma once

#include <string>
#include <string_view>

#include "advgen/core/error.hpp"

namespace advgen {

/// Binary toxicity label; the numeric values match the released data (1 is toxic).
enum class Label : int { benign = 0, toxic = 1 };

inline std::string_view label_name(Label l) noexcept { return l == Label::toxic ? "toxic" : "benign"; }

inline int label_value(Label l) noexcept { return static_cast<int>(l); }

inline Label label_from_int(int v) {
    require(v == 0 || v == 1, "label must be 0 or 1, got " + std::to_string(v));
    return v == 1 ? Label::toxic : Label::benign;
}

/// Accepts "toxic"/"benign" and "1"/"0".
inline Label parse_label(std::string_view s) {
    if (s == "toxic" || s == "1") return Label::toxic;
    if (s == "benign" || s == "0") return Label::benign;
    fail(ErrorCode::validation, "unknown label '" + std::string(s) + "'");
}

inline Label opposite(Label l) noexcept { return l == Label::toxic ? Label::benign : Label::toxic; }

}  // namespace advgen
