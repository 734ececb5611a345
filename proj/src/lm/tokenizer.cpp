#include "advgen/lm/tokenizer.hpp"

#include "advgen/core/error.hpp"

namespace advgen::lm {

namespace {

char ascii_lower(char c) noexcept {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

bool is_space(char c) noexcept {
    return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f';
}

// Punctuation that hugs the previous word when rendering.
bool attaches_left(std::string_view tok) noexcept {
    return tok.size() == 1 && (tok[0] == '.' || tok[0] == ',' || tok[0] == '!' ||
                               tok[0] == '?' || tok[0] == ';' || tok[0] == ':');
}

}  // namespace

bool is_punctuation(char c) noexcept {
    return (c >= '!' && c <= '/') || (c >= ':' && c <= '@') || (c >= '[' && c <= '`') ||
           (c >= '{' && c <= '~');
}

std::vector<std::string> split_tokens(std::string_view text) {
    std::vector<std::string> out;
    std::string word;
    auto flush = [&] {
        if (!word.empty()) out.push_back(std::move(word));
        word.clear();
    };
    for (char c : text) {
        if (c == '\n') {
            flush();
            out.emplace_back(Vocabulary::kNewline);
        } else if (is_space(c)) {
            flush();
        } else if (is_punctuation(c)) {
            flush();
            out.emplace_back(1, c);
        } else {
            word += ascii_lower(c);
        }
    }
    flush();
    return out;
}

TokenSequence tokenize(std::string_view text, Vocabulary& vocab, VocabMode mode) {
    if (mode == VocabMode::frozen) return tokenize(text, std::as_const(vocab));
    TokenSequence seq;
    for (const auto& piece : split_tokens(text)) seq.ids.push_back(vocab.add(piece));
    seq.rendering = detokenize(seq.ids, vocab);
    return seq;
}

TokenSequence tokenize(std::string_view text, const Vocabulary& vocab) {
    if (vocab.empty()) fail(ErrorCode::configuration, "frozen tokenization needs a non-empty vocabulary");
    TokenSequence seq;
    for (const auto& piece : split_tokens(text)) seq.ids.push_back(vocab.id_of(piece));
    seq.rendering = detokenize(seq.ids, vocab);
    return seq;
}

std::string detokenize(std::span<const TokenId> ids, const Vocabulary& vocab) {
    std::string out;
    bool at_line_start = true;
    for (TokenId id : ids) {
        if (id == Vocabulary::kBosId) continue;
        if (id == Vocabulary::kNewlineId) {
            out += '\n';
            at_line_start = true;
            continue;
        }
        const std::string& tok = vocab.token(id);
        if (!at_line_start && !attaches_left(tok)) out += ' ';
        out += tok;
        at_line_start = false;
    }
    return out;
}

}  // namespace advgen::lm
