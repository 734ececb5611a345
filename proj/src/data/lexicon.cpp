#include "advgen/data/lexicon.hpp"

#include <algorithm>

#include "advgen/core/error.hpp"
#include "advgen/core/io.hpp"
#include "advgen/lm/tokenizer.hpp"

namespace advgen::data {

namespace {

std::vector<std::string> word_tokens(std::string_view text) {
    auto toks = lm::split_tokens(text);
    std::erase(toks, std::string(lm::Vocabulary::kNewline));
    return toks;
}

}  // namespace

TermMatcher::TermMatcher(const std::vector<std::string>& terms) {
    for (const auto& term : terms) {
        auto toks = word_tokens(term);
        if (toks.empty()) continue;
        std::vector<std::string> rest(toks.begin() + 1, toks.end());
        by_first_[toks.front()].push_back(std::move(rest));
    }
}

bool TermMatcher::matches_tokens(const std::vector<std::string>& tokens) const {
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        auto it = by_first_.find(tokens[i]);
        if (it == by_first_.end()) continue;
        for (const auto& rest : it->second) {
            if (i + 1 + rest.size() > tokens.size()) continue;
            if (std::equal(rest.begin(), rest.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i + 1))) return true;
        }
    }
    return false;
}

bool TermMatcher::matches(std::string_view text) const { return matches_tokens(word_tokens(text)); }

ProfanityLexicon::ProfanityLexicon(std::set<std::string> words, std::set<std::string> removed_ambiguous)
    : removed_(std::move(removed_ambiguous)) {
    for (auto& w : words) {
        std::string lower = w;
        std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
        if (removed_.count(lower) == 0) words_.insert(std::move(lower));
    }
    require(!words_.empty(), "profanity lexicon is empty");
    matcher_ = TermMatcher(std::vector<std::string>(words_.begin(), words_.end()));
}

ProfanityLexicon ProfanityLexicon::load(const std::filesystem::path& path, std::set<std::string> removed_ambiguous) {
    auto list = read_word_list(path);
    return ProfanityLexicon(std::set<std::string>(list.begin(), list.end()), std::move(removed_ambiguous));
}

bool ProfanityLexicon::is_implicit(std::string_view text) const { return !matcher_.matches(text); }

std::vector<std::string> read_word_list(const std::filesystem::path& path) {
    std::vector<std::string> out;
    for (auto line : read_lines(path)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto b = line.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t");
        out.push_back(line.substr(b, e - b + 1));
    }
    return out;
}

}  // namespace advgen::data
