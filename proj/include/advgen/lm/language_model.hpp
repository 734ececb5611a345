#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "advgen/lm/vocabulary.hpp"

namespace advgen::lm {

/// Next-token distribution source used by the decoder and generators.
///
/// Implementations must be safe to call concurrently from several decode jobs.
class LanguageModel {
public:
    virtual ~LanguageModel() = default;

    virtual const Vocabulary& vocabulary() const = 0;

    /// Dense log-probabilities over vocabulary(). Entries a backend cannot see
    /// (e.g. outside a remote top-n window) are -infinity.
    virtual std::vector<double> next_token_logprobs(std::span<const TokenId> context) const = 0;

    /// Number of finite entries a backend can expose per step, when limited.
    virtual std::optional<std::size_t> logprob_window() const { return std::nullopt; }
};

}  // namespace advgen::lm
