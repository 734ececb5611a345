#include "advgen/core/error.hpp"

namespace advgen {

std::string_view error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::validation: return "E_VALIDATION";
        case ErrorCode::configuration: return "E_CONFIGURATION";
        case ErrorCode::no_tokens: return "E_NO_TOKENS";
        case ErrorCode::empty_generation: return "E_EMPTY_GENERATION";
        case ErrorCode::duplicate: return "E_DUPLICATE";
        case ErrorCode::split_infeasible: return "E_SPLIT_INFEASIBLE";
        case ErrorCode::contamination: return "E_CONTAMINATION";
        case ErrorCode::backend: return "E_BACKEND";
        case ErrorCode::protocol: return "E_PROTOCOL";
        case ErrorCode::not_found: return "E_NOT_FOUND";
        case ErrorCode::conflict: return "E_CONFLICT";
        case ErrorCode::io: return "E_IO";
    }
    return "E_UNKNOWN";
}

}  // namespace advgen
