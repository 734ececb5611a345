#pragma once

#include "advgen/core/rng.hpp"
#include "advgen/decode/decoder.hpp"

namespace advgen::decode {

/// Baseline continuation without the classifier: at each step the top_v LM
/// candidates are cut to the allowed mask and one token is drawn with
/// sample_top_k(resample_k, temperature). Stops at NEWLINE or max_tokens.
lm::TokenSequence top_k_continuation(const lm::LanguageModel& model, const lm::TokenSequence& prompt,
                                     const DecoderConfig& config, Rng& rng);

}  // namespace advgen::decode
