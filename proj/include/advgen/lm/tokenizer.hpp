#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "advgen/lm/vocabulary.hpp"

namespace advgen::lm {

struct TokenSequence {
    std::vector<TokenId> ids;
    std::string rendering;

    bool empty() const noexcept { return ids.empty(); }
    std::size_t size() const noexcept { return ids.size(); }
};

enum class VocabMode { build, frozen };

/// ASCII punctuation is split off as single-character tokens.
bool is_punctuation(char c) noexcept;

/// Lowercased word pieces. Spaces and tabs separate tokens, punctuation is
/// detached, and each '\n' becomes the NEWLINE token.
std::vector<std::string> split_tokens(std::string_view text);

/// In build mode unseen tokens extend `vocab`; in frozen mode they map to UNK
/// and an empty vocabulary is a configuration error.
TokenSequence tokenize(std::string_view text, Vocabulary& vocab, VocabMode mode);
TokenSequence tokenize(std::string_view text, const Vocabulary& vocab);

/// Inverse of tokenize up to whitespace: tokenize(detokenize(ids)) == ids for
/// every id other than BOS and UNK.
std::string detokenize(std::span<const TokenId> ids, const Vocabulary& vocab);

}  // namespace advgen::lm
