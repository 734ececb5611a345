#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "advgen/clf/classifier.hpp"
#include "advgen/core/io.hpp"
#include "advgen/core/label.hpp"
#include "advgen/core/rng.hpp"
#include "advgen/lm/language_model.hpp"
#include "advgen/lm/tokenizer.hpp"

namespace advgen::decode {

using lm::TokenId;

/// Which classifier class the search pushes toward.
///
/// false_negative: toxic prompts, maximize the benign class.
/// false_positive: benign prompts, maximize the toxic class.
/// plain: no classifier term.
enum class Mode { false_negative, false_positive, plain };

/// deterministic keeps the best-scoring extensions; stochastic samples them.
enum class Selection { deterministic, stochastic };

std::string_view mode_name(Mode m) noexcept;
Mode parse_mode(std::string_view s);
std::string_view selection_name(Selection s) noexcept;
Selection parse_selection(std::string_view s);

/// Target class of the classifier term. Plain mode has none.
Label classifier_objective(Mode mode);

/// The decoding mode that attacks a pool with the given label.
Mode adversarial_mode_for(Label pool_label) noexcept;

struct DecoderConfig {
    double lambda_lm = 0.5;
    double lambda_clf = 0.5;
    std::size_t beam_size = 10;
    std::size_t max_tokens = 30;
    std::size_t top_v = 100;
    std::size_t resample_k = 20;
    double temperature = 0.9;
    Mode mode = Mode::false_negative;
    Selection selection = Selection::deterministic;
    std::uint64_t seed = 0;
    std::set<std::string> punctuation_allowlist{".", ",", "!", "?", "'", "\"", ";", ":", "-"};

    void validate() const;

    /// Validated copy adapted to a backend: top_v is clamped to the vocabulary
    /// size and to any logprob window, resample_k to top_v, and plain mode
    /// zeroes lambda_clf.
    DecoderConfig resolved(std::size_t vocab_size, std::optional<std::size_t> window = std::nullopt) const;

    json to_json() const;
    /// Missing keys keep their defaults.
    static DecoderConfig from_json(const json& j);
};

struct Hypothesis {
    std::vector<TokenId> tokens;  // generation only, prompt excluded
    double lm_logprob = 0.0;
    double clf_logprob = 0.0;
    double score = 0.0;
    bool finished = false;
};

/// lambda_lm * lm_lp + lambda_clf * clf_lp, unnormalized.
inline double combined_step_score(double lm_lp, double clf_lp, double lambda_lm, double lambda_clf) noexcept {
    return lambda_lm * lm_lp + lambda_clf * clf_lp;
}

/// Beam order: higher score first, then lexicographically smaller token ids
/// (so lower id first and, for a shared prefix, the shorter hypothesis).
bool ranks_before(const Hypothesis& a, const Hypothesis& b) noexcept;

/// Tokens the search may emit. Prompt tokens are banned except allowlisted
/// punctuation and NEWLINE; BOS and UNK are never emitted.
std::vector<bool> allowed_tokens(std::span<const TokenId> prompt, const lm::Vocabulary& vocab,
                                 const std::set<std::string>& allowlist);

struct TraceEntry {
    std::vector<TokenId> tokens;
    double score = 0.0;
    bool finished = false;
};

struct DecodeTrace {
    std::vector<std::vector<TraceEntry>> steps;
    std::vector<TokenId> banned;
    std::size_t final_rank = 0;

    friend bool operator==(const DecodeTrace& a, const DecodeTrace& b);
};

struct DecodeResult {
    lm::TokenSequence output;  // prompt and terminating NEWLINE excluded
    Hypothesis best;
    DecodeTrace trace;
};

/// One search job over a fixed prompt. Holds references; the model, the
/// classifier and the prompt must outlive it.
class BeamSearch {
public:
    BeamSearch(const lm::LanguageModel& model, const clf::ToxicityClassifier* classifier,
               std::span<const TokenId> prompt, const DecoderConfig& config);

    const DecoderConfig& config() const noexcept { return config_; }
    const std::vector<bool>& mask() const noexcept { return mask_; }

    std::vector<Hypothesis> initial_beam() const;

    /// Extends every unfinished hypothesis by the allowed tokens among its
    /// top_v LM candidates, pools them with the finished ones and selects the
    /// next beam.
    std::vector<Hypothesis> expand(std::span<const Hypothesis> beam, Rng& rng) const;

    DecodeResult run(Rng& rng) const;

    /// Classifier term for a generation prefix (0 in plain mode).
    double classifier_term(std::span<const TokenId> generation) const;

private:
    const lm::LanguageModel& model_;
    const clf::ToxicityClassifier* classifier_;
    std::vector<TokenId> prompt_;
    DecoderConfig config_;
    std::vector<bool> mask_;
    Label target_ = Label::benign;
};

std::vector<Hypothesis> expand_beam(std::span<const Hypothesis> beam, const BeamSearch& search, Rng& rng);

DecodeResult decode(const lm::LanguageModel& model, const clf::ToxicityClassifier* classifier,
                    const lm::TokenSequence& prompt, const DecoderConfig& config, Rng& rng);

/// {prompt, config, output, score, trace?}
json decode_result_to_json(std::string_view prompt, const DecoderConfig& config, const DecodeResult& result,
                           const lm::Vocabulary& vocab, bool include_trace);

}  // namespace advgen::decode
