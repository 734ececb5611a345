#include "advgen/lm/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "advgen/core/error.hpp"

namespace advgen::lm {

std::vector<std::size_t> top_k_indices(std::span<const double> scores, std::size_t k) {
    std::vector<std::size_t> idx(scores.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    k = std::min(k, idx.size());
    auto better = [&](std::size_t a, std::size_t b) {
        return scores[a] > scores[b] || (scores[a] == scores[b] && a < b);
    };
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(), better);
    idx.resize(k);
    return idx;
}

std::size_t sample_top_k(std::span<const double> logprobs, std::size_t k, double temperature, Rng& rng) {
    require(k >= 1 && k <= logprobs.size(), "top-k: k must be in [1, V]");
    require(temperature > 0.0, "temperature must be positive");

    const auto kept = top_k_indices(logprobs, k);
    const double best = logprobs[kept.front()];
    if (!std::isfinite(best)) fail(ErrorCode::no_tokens, "top-k: no candidate has finite probability");
    if (k == 1 || temperature < kArgmaxTemperature) return kept.front();

    std::vector<double> weights(kept.size());
    double total = 0.0;
    for (std::size_t i = 0; i < kept.size(); ++i) {
        weights[i] = std::exp((logprobs[kept[i]] - best) / temperature);
        total += weights[i];
    }
    const double u = rng.uniform01() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < kept.size(); ++i) {
        acc += weights[i];
        if (u < acc) return kept[i];
    }
    // Rounding can leave u just above the final partial sum.
    for (std::size_t i = kept.size(); i-- > 0;) {
        if (weights[i] > 0.0) return kept[i];
    }
    return kept.front();
}

double logsumexp(std::span<const double> xs) {
    if (xs.empty()) return -std::numeric_limits<double>::infinity();
    const double m = *std::max_element(xs.begin(), xs.end());
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double x : xs) s += std::exp(x - m);
    return m + std::log(s);
}

}  // namespace advgen::lm
