#include "advgen/decode/topk.hpp"

#include <limits>

#include "advgen/lm/sampling.hpp"

namespace advgen::decode {

lm::TokenSequence top_k_continuation(const lm::LanguageModel& model, const lm::TokenSequence& prompt,
                                     const DecoderConfig& config, Rng& rng) {
    const auto& vocab = model.vocabulary();
    if (vocab.empty()) fail(ErrorCode::configuration, "language model has an empty vocabulary");
    const auto cfg = config.resolved(vocab.size(), model.logprob_window());
    const auto mask = allowed_tokens(prompt.ids, vocab, cfg.punctuation_allowlist);
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();

    std::vector<TokenId> context = prompt.ids;
    std::vector<TokenId> generated;
    while (generated.size() < cfg.max_tokens) {
        const auto lp = model.next_token_logprobs(context);
        std::vector<double> cut(lp.size(), kNegInf);
        for (auto i : lm::top_k_indices(lp, cfg.top_v)) {
            if (mask[i]) cut[i] = lp[i];
        }
        const auto tok = static_cast<TokenId>(lm::sample_top_k(cut, cfg.resample_k, cfg.temperature, rng));
        if (tok == lm::Vocabulary::kNewlineId) break;
        generated.push_back(tok);
        context.push_back(tok);
    }
    return {generated, lm::detokenize(generated, vocab)};
}

}  // namespace advgen::decode
