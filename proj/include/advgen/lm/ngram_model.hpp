#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "advgen/core/io.hpp"
#include "advgen/lm/language_model.hpp"
#include "advgen/lm/tokenizer.hpp"

namespace advgen::lm {

/// Additively smoothed n-gram model with longest-suffix backoff.
///
/// For a context the model picks the longest suffix (at most order-1 tokens)
/// that occurred during training and scores
///
///     p(w | ctx) = (c(ctx, w) + k) / (c(ctx) + k * V)
///
/// An untrained model is uniform. Instances are immutable once built.
class NGramModel final : public LanguageModel {
public:
    static constexpr int kDefaultOrder = 3;
    static constexpr double kDefaultSmoothing = 0.1;
    static constexpr int kFormatVersion = 1;

    /// Untrained (uniform) model over `vocab`.
    NGramModel(Vocabulary vocab, int order, double smoothing_k);

    /// Each corpus line is wrapped as BOS ... NEWLINE. New tokens extend `base`.
    static NGramModel train(std::span<const std::string> corpus, int order = kDefaultOrder,
                            double smoothing_k = kDefaultSmoothing, Vocabulary base = {});

    const Vocabulary& vocabulary() const override { return vocab_; }
    std::vector<double> next_token_logprobs(std::span<const TokenId> context) const override;

    double logprob(std::span<const TokenId> context, TokenId next) const;

    /// exp of the mean negative log-likelihood of `seq` (BOS-prefixed, NEWLINE
    /// appended unless already last).
    double perplexity(std::span<const TokenId> seq) const;

    int order() const noexcept { return order_; }
    double smoothing_k() const noexcept { return smoothing_k_; }
    std::size_t context_count() const noexcept { return counts_.size(); }

    json to_json() const;
    static NGramModel from_json(const json& j);
    void save(const std::filesystem::path& path) const;
    static NGramModel load(const std::filesystem::path& path);

    friend bool operator==(const NGramModel& a, const NGramModel& b) {
        return a.order_ == b.order_ && a.smoothing_k_ == b.smoothing_k_ && a.vocab_ == b.vocab_ &&
               a.counts_ == b.counts_;
    }

private:
    struct ContextCounts {
        std::uint64_t total = 0;
        std::map<TokenId, std::uint64_t> next;
        friend bool operator==(const ContextCounts&, const ContextCounts&) = default;
    };

    const ContextCounts* longest_context(std::span<const TokenId> context) const;

    Vocabulary vocab_;
    int order_;
    double smoothing_k_;
    std::map<std::vector<TokenId>, ContextCounts> counts_;
};

}  // namespace advgen::lm
