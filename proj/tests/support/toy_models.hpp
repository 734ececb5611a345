#pragma once

// Small randomized models and brute-force oracles shared by the unit and
// acceptance suites. Nothing here calls into the decoder under test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "advgen/clf/classifier.hpp"
#include "advgen/core/rng.hpp"
#include "advgen/lm/language_model.hpp"
#include "advgen/lm/tokenizer.hpp"

namespace advgen::testing {

using lm::TokenId;
using lm::Vocabulary;

/// Vocabulary of `words` plain word tokens w0..w{n-1} plus the given punctuation.
inline Vocabulary toy_vocabulary(std::size_t words, std::vector<std::string> punctuation = {}) {
    Vocabulary v;
    for (std::size_t i = 0; i < words; ++i) v.add("w" + std::to_string(i));
    for (const auto& p : punctuation) v.add(p);
    return v;
}

/// Context-dependent random distributions: each distinct context gets its own
/// pseudo-random logits, derived from a hash of (seed, context).
class RandomLanguageModel final : public lm::LanguageModel {
public:
    RandomLanguageModel(Vocabulary vocab, std::uint64_t seed, double spread = 3.0)
        : vocab_(std::move(vocab)), seed_(seed), spread_(spread) {}

    const Vocabulary& vocabulary() const override { return vocab_; }

    std::vector<double> next_token_logprobs(std::span<const TokenId> context) const override {
        std::uint64_t h = 1469598103934665603ULL ^ seed_;
        for (TokenId id : context) h = (h ^ (id + 0x9e37ULL)) * 1099511628211ULL;
        Rng rng(h);
        std::vector<double> logits(vocab_.size());
        for (auto& x : logits) x = spread_ * rng.uniform01();
        double m = *std::max_element(logits.begin(), logits.end());
        double s = 0.0;
        for (double x : logits) s += std::exp(x - m);
        const double lse = m + std::log(s);
        for (auto& x : logits) x -= lse;
        return logits;
    }

private:
    Vocabulary vocab_;
    std::uint64_t seed_;
    double spread_;
};

inline clf::LinearClassifier random_classifier(std::uint64_t seed, std::uint32_t dimension = 512,
                                               double scale = 2.0) {
    Rng rng(seed);
    std::vector<double> w(dimension);
    for (auto& x : w) x = scale * (2.0 * rng.uniform01() - 1.0);
    return clf::with_parameters(clf::FeatureSpace{1, 3, dimension}, std::move(w), scale * (rng.uniform01() - 0.5));
}

/// Tokens the rule permits, computed independently of the decoder.
inline std::vector<TokenId> oracle_allowed(std::span<const TokenId> prompt, const Vocabulary& vocab,
                                           const std::set<std::string>& allowlist) {
    std::vector<TokenId> out;
    for (TokenId id = 0; id < vocab.size(); ++id) {
        if (id == Vocabulary::kBosId || id == Vocabulary::kUnkId) continue;
        const bool in_prompt = std::find(prompt.begin(), prompt.end(), id) != prompt.end();
        if (in_prompt && id != Vocabulary::kNewlineId && allowlist.count(vocab.token(id)) == 0) continue;
        out.push_back(id);
    }
    return out;
}

struct ScoredSequence {
    std::vector<TokenId> tokens;
    double lm = 0.0;
    double clf = 0.0;
    double score = 0.0;
};

/// lambda_lm * sum of per-step LM log-probs + lambda_clf * classifier log-prob
/// of the final generation text (NEWLINE stripped).
inline ScoredSequence score_sequence(const lm::LanguageModel& model, const clf::ToxicityClassifier* classifier,
                                     Label target, std::span<const TokenId> prompt, std::vector<TokenId> tokens,
                                     double lambda_lm, double lambda_clf) {
    ScoredSequence s;
    std::vector<TokenId> ctx(prompt.begin(), prompt.end());
    for (TokenId t : tokens) {
        s.lm += model.next_token_logprobs(ctx)[t];
        ctx.push_back(t);
    }
    if (classifier != nullptr) {
        std::vector<TokenId> text_ids = tokens;
        if (!text_ids.empty() && text_ids.back() == Vocabulary::kNewlineId) text_ids.pop_back();
        s.clf = classifier->class_logprob(lm::detokenize(text_ids, model.vocabulary()), target);
    }
    s.score = lambda_lm * s.lm + lambda_clf * s.clf;
    s.tokens = std::move(tokens);
    return s;
}

/// Exhaustive search over every finished sequence (ends in NEWLINE, or reaches
/// max_len) drawn from the allowed tokens.
inline ScoredSequence exhaustive_argmax(const lm::LanguageModel& model, const clf::ToxicityClassifier* classifier,
                                        Label target, std::span<const TokenId> prompt,
                                        const std::vector<TokenId>& allowed, std::size_t max_len,
                                        double lambda_lm, double lambda_clf) {
    ScoredSequence best;
    bool have = false;
    std::vector<TokenId> current;
    auto consider = [&](const std::vector<TokenId>& seq) {
        auto s = score_sequence(model, classifier, target, prompt, seq, lambda_lm, lambda_clf);
        if (!have || s.score > best.score ||
            (s.score == best.score && std::lexicographical_compare(s.tokens.begin(), s.tokens.end(),
                                                                   best.tokens.begin(), best.tokens.end()))) {
            best = std::move(s);
            have = true;
        }
    };
    auto recurse = [&](auto&& self) -> void {
        for (TokenId t : allowed) {
            current.push_back(t);
            if (t == Vocabulary::kNewlineId || current.size() == max_len) {
                consider(current);
            } else {
                self(self);
            }
            current.pop_back();
        }
    };
    recurse(recurse);
    return best;
}

/// Textbook beam search on LM log-probs alone, with the same top_v cut and
/// tie-breaking rule the decoder documents.
struct ReferenceHyp {
    std::vector<TokenId> tokens;
    double score = 0.0;
    bool finished = false;
};

inline std::vector<ReferenceHyp> reference_beam_search(const lm::LanguageModel& model, std::span<const TokenId> prompt,
                                                       const std::vector<TokenId>& allowed, std::size_t beam_size,
                                                       std::size_t top_v, std::size_t max_len, double lambda_lm) {
    auto before = [](const ReferenceHyp& a, const ReferenceHyp& b) {
        if (a.score != b.score) return a.score > b.score;
        return std::lexicographical_compare(a.tokens.begin(), a.tokens.end(), b.tokens.begin(), b.tokens.end());
    };
    std::vector<ReferenceHyp> beam{ReferenceHyp{}};
    for (std::size_t step = 0; step < max_len; ++step) {
        if (std::all_of(beam.begin(), beam.end(), [](const ReferenceHyp& h) { return h.finished; })) break;
        std::vector<ReferenceHyp> next;
        for (const auto& h : beam) {
            if (h.finished) {
                next.push_back(h);
                continue;
            }
            std::vector<TokenId> ctx(prompt.begin(), prompt.end());
            ctx.insert(ctx.end(), h.tokens.begin(), h.tokens.end());
            const auto lps = model.next_token_logprobs(ctx);
            std::vector<TokenId> order(lps.size());
            for (TokenId i = 0; i < order.size(); ++i) order[i] = i;
            std::stable_sort(order.begin(), order.end(), [&](TokenId a, TokenId b) { return lps[a] > lps[b]; });
            order.resize(std::min(top_v, order.size()));
            for (TokenId t : order) {
                if (std::find(allowed.begin(), allowed.end(), t) == allowed.end()) continue;
                ReferenceHyp e{h.tokens, h.score + lambda_lm * lps[t], false};
                e.tokens.push_back(t);
                e.finished = t == Vocabulary::kNewlineId || e.tokens.size() == max_len;
                next.push_back(std::move(e));
            }
        }
        std::sort(next.begin(), next.end(), before);
        if (next.size() > beam_size) next.resize(beam_size);
        beam = std::move(next);
    }
    return beam;
}

}  // namespace advgen::testing
