#pragma once

#include <cstdint>
#include <vector>

#include "advgen/clf/classifier.hpp"
#include "advgen/core/rng.hpp"
#include "advgen/data/record.hpp"
#include "advgen/decode/decoder.hpp"
#include "advgen/lm/language_model.hpp"
#include "advgen/prompt/pool.hpp"

namespace advgen::prompt {

inline constexpr std::size_t kDefaultRetryBudget = 3;

struct GenerationConfig {
    data::GenerationMethod method = data::GenerationMethod::top_k;
    std::size_t demos = 5;
    decode::DecoderConfig decoder;
    std::size_t retry_budget = kDefaultRetryBudget;

    json to_json() const;
    static GenerationConfig from_json(const json& j);
};

/// Renders a fresh prompt from the pool and continues it up to the first
/// NEWLINE. ALICE needs a classifier and the decoder mode that attacks the
/// pool label. An empty continuation is retried with a new prompt up to
/// retry_budget times before E_EMPTY_GENERATION. The classifier, when given,
/// fills classifier_prediction for either method.
data::GenerationRecord generate_statement(const lm::LanguageModel& model, const clf::ToxicityClassifier* classifier,
                                          const DemonstrationPool& pool, const GenerationConfig& config, Rng& rng);

/// Batch job file: {group, label, method, count, decoder, seeds, demos?, retry_budget?}.
/// With one seed, record i draws from Rng(seed).fork(i); otherwise seeds
/// holds one seed per record.
struct BatchConfig {
    std::string group;
    Label label = Label::toxic;
    std::size_t count = 1;
    std::vector<std::uint64_t> seeds{0};
    GenerationConfig generation;

    Rng rng_for(std::size_t i) const;
    json to_json() const;
    static BatchConfig from_json(const json& j);
};

std::vector<data::GenerationRecord> generate_batch(const lm::LanguageModel& model,
                                                   const clf::ToxicityClassifier* classifier,
                                                   const DemonstrationPool& pool, const BatchConfig& batch);

}  // namespace advgen::prompt
