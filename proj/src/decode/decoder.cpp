#include "advgen/decode/decoder.hpp"

#include <algorithm>
#include <cmath>

#include "advgen/core/error.hpp"
#include "advgen/lm/sampling.hpp"

namespace advgen::decode {

std::string_view mode_name(Mode m) noexcept {
    switch (m) {
        case Mode::false_negative: return "false_negative";
        case Mode::false_positive: return "false_positive";
        case Mode::plain: return "plain";
    }
    return "plain";
}

Mode parse_mode(std::string_view s) {
    if (s == "false_negative") return Mode::false_negative;
    if (s == "false_positive") return Mode::false_positive;
    if (s == "plain") return Mode::plain;
    fail(ErrorCode::validation, "unknown decoding mode '" + std::string(s) + "'");
}

std::string_view selection_name(Selection s) noexcept {
    return s == Selection::deterministic ? "deterministic" : "stochastic";
}

Selection parse_selection(std::string_view s) {
    if (s == "deterministic") return Selection::deterministic;
    if (s == "stochastic") return Selection::stochastic;
    fail(ErrorCode::validation, "unknown selection '" + std::string(s) + "'");
}

Label classifier_objective(Mode mode) {
    switch (mode) {
        case Mode::false_negative: return Label::benign;
        case Mode::false_positive: return Label::toxic;
        case Mode::plain: break;
    }
    fail(ErrorCode::validation, "plain decoding has no classifier objective");
}

Mode adversarial_mode_for(Label pool_label) noexcept {
    return pool_label == Label::toxic ? Mode::false_negative : Mode::false_positive;
}

void DecoderConfig::validate() const {
    require(lambda_lm >= 0.0 && std::isfinite(lambda_lm), "lambda_L must be >= 0");
    require(lambda_clf >= 0.0 && std::isfinite(lambda_clf), "lambda_C must be >= 0");
    require(beam_size >= 1, "beam_size must be >= 1");
    require(max_tokens >= 1, "max_tokens must be >= 1");
    require(top_v >= 1, "top_v must be >= 1");
    require(resample_k >= 1, "resample_k must be >= 1");
    require(resample_k <= top_v, "resample_k must not exceed top_v");
    require(temperature > 0.0, "temperature must be positive");
}

DecoderConfig DecoderConfig::resolved(std::size_t vocab_size, std::optional<std::size_t> window) const {
    validate();
    DecoderConfig out = *this;
    out.top_v = std::min(out.top_v, vocab_size);
    if (window) out.top_v = std::min(out.top_v, *window);
    out.top_v = std::max<std::size_t>(out.top_v, 1);
    out.resample_k = std::min(out.resample_k, out.top_v);
    if (out.mode == Mode::plain) out.lambda_clf = 0.0;
    return out;
}

json DecoderConfig::to_json() const {
    return {{"lambda_L", lambda_lm},
            {"lambda_C", lambda_clf},
            {"beam_size", beam_size},
            {"max_tokens", max_tokens},
            {"top_v", top_v},
            {"resample_k", resample_k},
            {"temperature", temperature},
            {"mode", mode_name(mode)},
            {"selection", selection_name(selection)},
            {"seed", seed},
            {"punctuation_allowlist", punctuation_allowlist}};
}

DecoderConfig DecoderConfig::from_json(const json& j) {
    DecoderConfig c;
    try {
        c.lambda_lm = j.value("lambda_L", c.lambda_lm);
        c.lambda_clf = j.value("lambda_C", c.lambda_clf);
        c.beam_size = j.value("beam_size", c.beam_size);
        c.max_tokens = j.value("max_tokens", c.max_tokens);
        c.top_v = j.value("top_v", c.top_v);
        c.resample_k = j.value("resample_k", c.resample_k);
        c.temperature = j.value("temperature", c.temperature);
        if (j.contains("mode")) c.mode = parse_mode(j.at("mode").get<std::string>());
        if (j.contains("selection")) c.selection = parse_selection(j.at("selection").get<std::string>());
        c.seed = j.value("seed", c.seed);
        if (j.contains("punctuation_allowlist")) {
            c.punctuation_allowlist = j.at("punctuation_allowlist").get<std::set<std::string>>();
        }
    } catch (const json::exception& e) {
        fail(ErrorCode::validation, std::string("bad decoder config: ") + e.what());
    }
    c.validate();
    return c;
}

bool ranks_before(const Hypothesis& a, const Hypothesis& b) noexcept {
    if (a.score != b.score) return a.score > b.score;
    return std::lexicographical_compare(a.tokens.begin(), a.tokens.end(), b.tokens.begin(), b.tokens.end());
}

std::vector<bool> allowed_tokens(std::span<const TokenId> prompt, const lm::Vocabulary& vocab,
                                 const std::set<std::string>& allowlist) {
    std::vector<bool> mask(vocab.size(), true);
    mask[lm::Vocabulary::kBosId] = false;
    mask[lm::Vocabulary::kUnkId] = false;
    for (TokenId id : prompt) {
        if (id >= mask.size() || id == lm::Vocabulary::kNewlineId) continue;
        if (allowlist.count(vocab.token(id)) != 0) continue;
        mask[id] = false;
    }
    if (std::none_of(mask.begin(), mask.end(), [](bool b) { return b; })) {
        fail(ErrorCode::no_tokens, "the prompt ban leaves no token to generate");
    }
    return mask;
}

bool operator==(const DecodeTrace& a, const DecodeTrace& b) {
    if (a.banned != b.banned || a.final_rank != b.final_rank || a.steps.size() != b.steps.size()) return false;
    for (std::size_t s = 0; s < a.steps.size(); ++s) {
        const auto& x = a.steps[s];
        const auto& y = b.steps[s];
        if (x.size() != y.size()) return false;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i].tokens != y[i].tokens || x[i].score != y[i].score || x[i].finished != y[i].finished) {
                return false;
            }
        }
    }
    return true;
}

BeamSearch::BeamSearch(const lm::LanguageModel& model, const clf::ToxicityClassifier* classifier,
                       std::span<const TokenId> prompt, const DecoderConfig& config)
    : model_(model), classifier_(classifier), prompt_(prompt.begin(), prompt.end()) {
    const auto& vocab = model.vocabulary();
    if (vocab.empty()) fail(ErrorCode::configuration, "decoding needs a non-empty vocabulary");
    config_ = config.resolved(vocab.size(), model.logprob_window());
    if (config_.mode != Mode::plain) {
        if (classifier_ == nullptr) fail(ErrorCode::configuration, "adversarial decoding needs a classifier");
        target_ = classifier_objective(config_.mode);
    }
    mask_ = allowed_tokens(prompt_, vocab, config_.punctuation_allowlist);
}

std::vector<Hypothesis> BeamSearch::initial_beam() const { return {Hypothesis{}}; }

double BeamSearch::classifier_term(std::span<const TokenId> generation) const {
    if (config_.mode == Mode::plain) return 0.0;
    if (!generation.empty() && generation.back() == lm::Vocabulary::kNewlineId) {
        generation = generation.first(generation.size() - 1);
    }
    return classifier_->class_logprob(lm::detokenize(generation, model_.vocabulary()), target_);
}

std::vector<Hypothesis> BeamSearch::expand(std::span<const Hypothesis> beam, Rng& rng) const {
    require(!beam.empty(), "cannot expand an empty beam");
    std::vector<Hypothesis> pool;
    bool any_unfinished = false;
    std::size_t extensions = 0;
    std::vector<TokenId> context;

    for (const auto& hyp : beam) {
        if (hyp.finished) {
            pool.push_back(hyp);
            continue;
        }
        any_unfinished = true;
        context.assign(prompt_.begin(), prompt_.end());
        context.insert(context.end(), hyp.tokens.begin(), hyp.tokens.end());
        const auto logprobs = model_.next_token_logprobs(context);

        for (std::size_t idx : lm::top_k_indices(logprobs, config_.top_v)) {
            if (!mask_[idx] || !std::isfinite(logprobs[idx])) continue;
            Hypothesis ext;
            ext.tokens = hyp.tokens;
            ext.tokens.push_back(static_cast<TokenId>(idx));
            ext.lm_logprob = hyp.lm_logprob + logprobs[idx];
            // A terminating NEWLINE leaves the scored text unchanged.
            const bool same_text = idx == lm::Vocabulary::kNewlineId && !hyp.tokens.empty();
            ext.clf_logprob = same_text ? hyp.clf_logprob : classifier_term(ext.tokens);
            ext.score = combined_step_score(ext.lm_logprob, ext.clf_logprob, config_.lambda_lm, config_.lambda_clf);
            ext.finished = idx == lm::Vocabulary::kNewlineId || ext.tokens.size() >= config_.max_tokens;
            pool.push_back(std::move(ext));
            ++extensions;
        }
    }
    require(any_unfinished, "beam has no unfinished hypothesis");
    if (extensions == 0) fail(ErrorCode::no_tokens, "no allowed candidate among the top_v tokens");

    std::sort(pool.begin(), pool.end(), ranks_before);
    if (config_.selection == Selection::deterministic || pool.size() <= config_.beam_size) {
        if (pool.size() > config_.beam_size) pool.resize(config_.beam_size);
        return pool;
    }

    std::vector<Hypothesis> chosen;
    chosen.reserve(config_.beam_size);
    std::vector<double> scores;
    while (chosen.size() < config_.beam_size) {
        scores.resize(pool.size());
        for (std::size_t i = 0; i < pool.size(); ++i) scores[i] = pool[i].score;
        const std::size_t k = std::min(config_.resample_k, pool.size());
        const std::size_t pick = lm::sample_top_k(scores, k, config_.temperature, rng);
        chosen.push_back(std::move(pool[pick]));
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    std::sort(chosen.begin(), chosen.end(), ranks_before);
    return chosen;
}

DecodeResult BeamSearch::run(Rng& rng) const {
    DecodeResult result;
    for (TokenId id : prompt_) {
        if (id < mask_.size() && !mask_[id]) result.trace.banned.push_back(id);
    }
    std::sort(result.trace.banned.begin(), result.trace.banned.end());
    result.trace.banned.erase(std::unique(result.trace.banned.begin(), result.trace.banned.end()),
                              result.trace.banned.end());

    auto beam = initial_beam();
    for (std::size_t step = 0; step < config_.max_tokens; ++step) {
        if (std::all_of(beam.begin(), beam.end(), [](const Hypothesis& h) { return h.finished; })) break;
        beam = expand(beam, rng);
        auto& record = result.trace.steps.emplace_back();
        for (const auto& h : beam) record.push_back({h.tokens, h.score, h.finished});
    }

    auto best = std::find_if(beam.begin(), beam.end(), [](const Hypothesis& h) { return h.finished; });
    if (best == beam.end()) best = beam.begin();
    result.trace.final_rank = static_cast<std::size_t>(best - beam.begin());
    result.best = *best;

    std::vector<TokenId> out = best->tokens;
    if (!out.empty() && out.back() == lm::Vocabulary::kNewlineId) out.pop_back();
    result.output.rendering = lm::detokenize(out, model_.vocabulary());
    result.output.ids = std::move(out);
    return result;
}

std::vector<Hypothesis> expand_beam(std::span<const Hypothesis> beam, const BeamSearch& search, Rng& rng) {
    return search.expand(beam, rng);
}

DecodeResult decode(const lm::LanguageModel& model, const clf::ToxicityClassifier* classifier,
                    const lm::TokenSequence& prompt, const DecoderConfig& config, Rng& rng) {
    return BeamSearch(model, classifier, prompt.ids, config).run(rng);
}

json decode_result_to_json(std::string_view prompt, const DecoderConfig& config, const DecodeResult& result,
                           const lm::Vocabulary& vocab, bool include_trace) {
    json out{{"prompt", prompt},
             {"config", config.to_json()},
             {"output", result.output.rendering},
             {"score", result.best.score}};
    if (include_trace) {
        json steps = json::array();
        for (const auto& step : result.trace.steps) {
            json beam = json::array();
            for (const auto& e : step) {
                beam.push_back({{"text", lm::detokenize(e.tokens, vocab)},
                                {"tokens", e.tokens},
                                {"score", e.score},
                                {"finished", e.finished}});
            }
            steps.push_back(std::move(beam));
        }
        json banned = json::array();
        for (TokenId id : result.trace.banned) banned.push_back(vocab.token(id));
        out["trace"] = {{"steps", std::move(steps)}, {"banned", std::move(banned)},
                        {"final_rank", result.trace.final_rank}};
    }
    return out;
}

}  // namespace advgen::decode
