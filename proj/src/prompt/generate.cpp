#include "advgen/prompt/generate.hpp"

#include "advgen/core/error.hpp"
#include "advgen/decode/topk.hpp"
#include "advgen/lm/tokenizer.hpp"
#include "advgen/prompt/render.hpp"

namespace advgen::prompt {

json GenerationConfig::to_json() const {
    return {{"method", data::method_name(method)},
            {"demos", demos},
            {"decoder", decoder.to_json()},
            {"retry_budget", retry_budget}};
}

GenerationConfig GenerationConfig::from_json(const json& j) {
    try {
        GenerationConfig c;
        if (j.contains("method")) c.method = data::parse_method(j.at("method").get<std::string>());
        c.demos = j.value("demos", c.demos);
        if (j.contains("decoder")) c.decoder = decode::DecoderConfig::from_json(j.at("decoder"));
        c.retry_budget = j.value("retry_budget", c.retry_budget);
        require(c.demos >= 1, "demos must be at least 1");
        return c;
    } catch (const json::exception& e) {
        fail(ErrorCode::validation, std::string("bad generation config: ") + e.what());
    }
}

data::GenerationRecord generate_statement(const lm::LanguageModel& model, const clf::ToxicityClassifier* classifier,
                                          const DemonstrationPool& pool, const GenerationConfig& config, Rng& rng) {
    const bool alice = config.method == data::GenerationMethod::alice;
    if (alice) {
        if (classifier == nullptr) fail(ErrorCode::configuration, "ALICE generation needs a classifier");
        const auto expected = decode::adversarial_mode_for(pool.label());
        if (config.decoder.mode != expected) {
            fail(ErrorCode::configuration, "decoder mode " + std::string(decode::mode_name(config.decoder.mode)) +
                                               " does not attack a " + std::string(label_name(pool.label())) +
                                               " pool; use " + std::string(decode::mode_name(expected)));
        }
    }

    for (std::size_t attempt = 0; attempt <= config.retry_budget; ++attempt) {
        const auto demos = sample_demos(pool, config.demos, rng);
        const auto prompt_text = render_prompt(demos);
        const auto prompt = lm::tokenize(prompt_text, model.vocabulary());

        std::string generation;
        if (alice) {
            generation = decode::decode(model, classifier, prompt, config.decoder, rng).output.rendering;
        } else {
            generation = decode::top_k_continuation(model, prompt, config.decoder, rng).rendering;
        }
        if (generation.find_first_not_of(" \t") == std::string::npos) continue;

        data::GenerationRecord r;
        r.prompt = prompt_text;
        r.generation = std::move(generation);
        r.method = config.method;
        r.prompt_label = pool.label();
        r.group = pool.group();
        if (classifier != nullptr) r.classifier_prediction = classifier->toxicity_prob(r.generation);
        if (alice) r.decoding = std::string(decode::selection_name(config.decoder.selection));
        return r;
    }
    fail(ErrorCode::empty_generation,
         "no non-empty generation after " + std::to_string(config.retry_budget + 1) + " attempts");
}

Rng BatchConfig::rng_for(std::size_t i) const {
    if (seeds.size() == 1) return Rng(seeds.front()).fork(i);
    return Rng(seeds.at(i));
}

json BatchConfig::to_json() const {
    auto j = generation.to_json();
    j["group"] = group;
    j["label"] = label_name(label);
    j["count"] = count;
    j["seeds"] = seeds;
    return j;
}

BatchConfig BatchConfig::from_json(const json& j) {
    try {
        BatchConfig b;
        b.generation = GenerationConfig::from_json(j);
        b.group = j.at("group").get<std::string>();
        const auto& label = j.at("label");
        b.label = label.is_number() ? label_from_int(label.get<int>()) : parse_label(label.get<std::string>());
        b.count = j.value("count", b.count);
        if (j.contains("seeds")) b.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
        require(!b.seeds.empty(), "seeds must not be empty");
        require(b.seeds.size() == 1 || b.seeds.size() == b.count, "seeds must hold one seed or one per record");
        return b;
    } catch (const json::exception& e) {
        fail(ErrorCode::validation, std::string("bad batch config: ") + e.what());
    }
}

std::vector<data::GenerationRecord> generate_batch(const lm::LanguageModel& model,
                                                   const clf::ToxicityClassifier* classifier,
                                                   const DemonstrationPool& pool, const BatchConfig& batch) {
    require(pool.group() == batch.group && pool.label() == batch.label, "batch config does not match the pool");
    std::vector<data::GenerationRecord> out;
    out.reserve(batch.count);
    for (std::size_t i = 0; i < batch.count; ++i) {
        auto rng = batch.rng_for(i);
        out.push_back(generate_statement(model, classifier, pool, batch.generation, rng));
    }
    return out;
}

}  // namespace advgen::prompt
