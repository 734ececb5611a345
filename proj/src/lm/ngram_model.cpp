#include "advgen/lm/ngram_model.hpp"

#include <algorithm>
#include <cmath>

#include "advgen/core/error.hpp"

namespace advgen::lm {

namespace {

constexpr const char* kFormat = "advgen.ngram";

void validate_params(int order, double smoothing_k) {
    require(order >= 1, "n-gram order must be >= 1");
    require(smoothing_k > 0.0 && std::isfinite(smoothing_k), "smoothing_k must be positive");
}

}  // namespace

NGramModel::NGramModel(Vocabulary vocab, int order, double smoothing_k)
    : vocab_(std::move(vocab)), order_(order), smoothing_k_(smoothing_k) {
    validate_params(order, smoothing_k);
}

NGramModel NGramModel::train(std::span<const std::string> corpus, int order, double smoothing_k,
                             Vocabulary base) {
    validate_params(order, smoothing_k);
    require(!corpus.empty(), "training corpus is empty");

    std::vector<std::vector<TokenId>> lines;
    lines.reserve(corpus.size());
    for (const auto& line : corpus) {
        std::vector<TokenId> seq{Vocabulary::kBosId};
        for (TokenId id : tokenize(line, base, VocabMode::build).ids) {
            if (id != Vocabulary::kNewlineId) seq.push_back(id);
        }
        seq.push_back(Vocabulary::kNewlineId);
        lines.push_back(std::move(seq));
    }

    NGramModel model(std::move(base), order, smoothing_k);
    const auto max_ctx = static_cast<std::size_t>(order - 1);
    for (const auto& seq : lines) {
        for (std::size_t i = 1; i < seq.size(); ++i) {
            for (std::size_t len = 0; len <= std::min(max_ctx, i); ++len) {
                auto& slot = model.counts_[std::vector<TokenId>(seq.begin() + static_cast<std::ptrdiff_t>(i - len),
                                                                 seq.begin() + static_cast<std::ptrdiff_t>(i))];
                ++slot.total;
                ++slot.next[seq[i]];
            }
        }
    }
    return model;
}

const NGramModel::ContextCounts* NGramModel::longest_context(std::span<const TokenId> context) const {
    const std::size_t max_len = std::min(context.size(), static_cast<std::size_t>(order_ - 1));
    for (std::size_t len = max_len + 1; len-- > 0;) {
        std::vector<TokenId> key(context.end() - static_cast<std::ptrdiff_t>(len), context.end());
        if (auto it = counts_.find(key); it != counts_.end()) return &it->second;
    }
    return nullptr;
}

std::vector<double> NGramModel::next_token_logprobs(std::span<const TokenId> context) const {
    const auto v = static_cast<double>(vocab_.size());
    const ContextCounts* ctx = longest_context(context);
    if (ctx == nullptr) return std::vector<double>(vocab_.size(), -std::log(v));

    const double denom = static_cast<double>(ctx->total) + smoothing_k_ * v;
    std::vector<double> out(vocab_.size(), std::log(smoothing_k_ / denom));
    for (const auto& [id, count] : ctx->next) {
        out[id] = std::log((static_cast<double>(count) + smoothing_k_) / denom);
    }
    return out;
}

double NGramModel::logprob(std::span<const TokenId> context, TokenId next) const {
    const auto v = static_cast<double>(vocab_.size());
    const ContextCounts* ctx = longest_context(context);
    if (ctx == nullptr) return -std::log(v);
    double count = 0.0;
    if (auto it = ctx->next.find(next); it != ctx->next.end()) count = static_cast<double>(it->second);
    return std::log((count + smoothing_k_) / (static_cast<double>(ctx->total) + smoothing_k_ * v));
}

double NGramModel::perplexity(std::span<const TokenId> seq) const {
    require(!seq.empty(), "perplexity of an empty sequence");
    std::vector<TokenId> full{Vocabulary::kBosId};
    full.insert(full.end(), seq.begin(), seq.end());
    if (full.back() != Vocabulary::kNewlineId) full.push_back(Vocabulary::kNewlineId);

    double total = 0.0;
    for (std::size_t i = 1; i < full.size(); ++i) {
        total += logprob(std::span(full).first(i), full[i]);
    }
    return std::exp(-total / static_cast<double>(full.size() - 1));
}

json NGramModel::to_json() const {
    json counts = json::array();
    for (const auto& [ctx, cc] : counts_) {
        json next = json::array();
        for (const auto& [id, c] : cc.next) next.push_back({id, c});
        counts.push_back({{"context", ctx}, {"next", std::move(next)}});
    }
    return {{"format", kFormat},
            {"version", kFormatVersion},
            {"order", order_},
            {"smoothing_k", smoothing_k_},
            {"vocab", std::vector<std::string>(vocab_.tokens().begin(), vocab_.tokens().end())},
            {"counts", std::move(counts)}};
}

NGramModel NGramModel::from_json(const json& j) {
    try {
        if (j.at("format") != kFormat) fail(ErrorCode::validation, "not an n-gram model file");
        if (j.at("version").get<int>() != kFormatVersion) {
            fail(ErrorCode::validation, "unsupported n-gram model version");
        }
        Vocabulary vocab;
        const auto tokens = j.at("vocab").get<std::vector<std::string>>();
        require(tokens.size() >= Vocabulary::kSpecialCount, "model vocabulary lacks specials");
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            require(vocab.add(tokens[i]) == i, "model vocabulary has duplicate or misplaced tokens");
        }
        NGramModel model(std::move(vocab), j.at("order").get<int>(), j.at("smoothing_k").get<double>());
        const auto v = model.vocab_.size();
        for (const auto& entry : j.at("counts")) {
            auto ctx = entry.at("context").get<std::vector<TokenId>>();
            require(ctx.size() < static_cast<std::size_t>(model.order_), "context longer than order-1");
            ContextCounts cc;
            for (const auto& pair : entry.at("next")) {
                const auto id = pair.at(0).get<TokenId>();
                const auto c = pair.at(1).get<std::uint64_t>();
                require(id < v && c >= 1, "invalid n-gram count entry");
                cc.next[id] = c;
                cc.total += c;
            }
            for (TokenId id : ctx) require(id < v, "context token out of range");
            model.counts_.emplace(std::move(ctx), std::move(cc));
        }
        return model;
    } catch (const json::exception& e) {
        fail(ErrorCode::validation, std::string("malformed n-gram model: ") + e.what());
    }
}

void NGramModel::save(const std::filesystem::path& path) const { write_text(path, to_json().dump() + "\n"); }

NGramModel NGramModel::load(const std::filesystem::path& path) { return from_json(read_json(path)); }

}  // namespace advgen::lm
