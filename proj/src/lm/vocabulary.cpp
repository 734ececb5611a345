#include "advgen/lm/vocabulary.hpp"

#include "advgen/core/error.hpp"

namespace advgen::lm {

Vocabulary::Vocabulary() {
    for (std::string_view s : {kBos, kNewline, kUnk}) add(s);
}

TokenId Vocabulary::add(std::string_view token) {
    require(!token.empty(), "vocabulary tokens must be non-empty");
    if (auto it = index_.find(std::string(token)); it != index_.end()) return it->second;
    const auto id = static_cast<TokenId>(tokens_.size());
    tokens_.emplace_back(token);
    index_.emplace(tokens_.back(), id);
    return id;
}

std::optional<TokenId> Vocabulary::find(std::string_view token) const {
    if (auto it = index_.find(std::string(token)); it != index_.end()) return it->second;
    return std::nullopt;
}

}  // namespace advgen::lm
