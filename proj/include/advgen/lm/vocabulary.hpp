#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace advgen::lm {

using TokenId = std::uint32_t;

/// Dense token inventory. Ids 0..2 are always the reserved specials.
class Vocabulary {
public:
    static constexpr std::string_view kBos = "<bos>";
    static constexpr std::string_view kNewline = "\n";
    static constexpr std::string_view kUnk = "<unk>";

    static constexpr TokenId kBosId = 0;
    static constexpr TokenId kNewlineId = 1;
    static constexpr TokenId kUnkId = 2;
    static constexpr std::size_t kSpecialCount = 3;

    Vocabulary();

    /// Id of `token`, inserting it if new.
    TokenId add(std::string_view token);

    std::optional<TokenId> find(std::string_view token) const;

    /// Frozen lookup: unknown tokens map to UNK.
    TokenId id_of(std::string_view token) const { return find(token).value_or(kUnkId); }

    const std::string& token(TokenId id) const { return tokens_.at(id); }
    std::span<const std::string> tokens() const { return tokens_; }
    std::size_t size() const noexcept { return tokens_.size(); }

    bool is_special(TokenId id) const noexcept { return id < kSpecialCount; }

    /// True when only the reserved specials are present.
    bool empty() const noexcept { return tokens_.size() == kSpecialCount; }

    friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
        return a.tokens_ == b.tokens_;
    }

private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, TokenId> index_;
};

}  // namespace advgen::lm
