#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace advgen::data {

/// Whole-word, case-insensitive matcher over a term list. Multi-word terms
/// match as contiguous token runs under the toolkit tokenizer.
class TermMatcher {
public:
    TermMatcher() = default;
    explicit TermMatcher(const std::vector<std::string>& terms);

    bool matches(std::string_view text) const;
    bool matches_tokens(const std::vector<std::string>& tokens) const;
    bool empty() const noexcept { return by_first_.empty(); }

private:
    // First token -> remaining token runs ({} for single-token terms).
    std::unordered_map<std::string, std::vector<std::vector<std::string>>> by_first_;
};

/// Profanity word list with ambiguous entries removed.
class ProfanityLexicon {
public:
    static inline const std::set<std::string> kDefaultAmbiguous{"bloody"};

    ProfanityLexicon(std::set<std::string> words, std::set<std::string> removed_ambiguous = kDefaultAmbiguous);

    /// One lowercase word per line; '#' starts a comment.
    static ProfanityLexicon load(const std::filesystem::path& path,
                                 std::set<std::string> removed_ambiguous = kDefaultAmbiguous);

    const std::set<std::string>& words() const noexcept { return words_; }
    const std::set<std::string>& removed_ambiguous() const noexcept { return removed_; }

    /// True iff no lexicon word occurs as a whole word.
    bool is_implicit(std::string_view text) const;

private:
    std::set<std::string> words_;
    std::set<std::string> removed_;
    TermMatcher matcher_;
};

/// Lines with comments and surrounding blanks stripped; empty lines skipped.
std::vector<std::string> read_word_list(const std::filesystem::path& path);

}  // namespace advgen::data
