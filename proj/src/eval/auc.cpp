#include "advgen/eval/auc.hpp"

#include <algorithm>
#include <numeric>

#include "advgen/core/error.hpp"

namespace advgen::eval {

double roc_auc(std::span<const double> scores, std::span<const Label> gold) {
    require(scores.size() == gold.size(), "scores and labels differ in length");
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto i, auto j) { return scores[i] < scores[j]; });

    // Rank sum of the positives with midranks for ties.
    double rank_sum = 0.0;
    std::size_t n_pos = 0;
    for (std::size_t lo = 0; lo < order.size();) {
        std::size_t hi = lo;
        while (hi < order.size() && scores[order[hi]] == scores[order[lo]]) ++hi;
        const double midrank = (static_cast<double>(lo + 1) + static_cast<double>(hi)) / 2.0;
        for (std::size_t k = lo; k < hi; ++k) {
            if (gold[order[k]] == Label::toxic) {
                rank_sum += midrank;
                ++n_pos;
            }
        }
        lo = hi;
    }
    const std::size_t n_neg = scores.size() - n_pos;
    require(n_pos > 0 && n_neg > 0, "AUC needs both labels");
    const double np = static_cast<double>(n_pos);
    const double u = rank_sum - np * (np + 1.0) / 2.0;
    return u / (np * static_cast<double>(n_neg));
}

double roc_auc(std::span<const ScoredExample> examples) {
    std::vector<double> scores;
    std::vector<Label> gold;
    for (const auto& e : examples) {
        scores.push_back(e.score);
        gold.push_back(e.gold);
    }
    return roc_auc(scores, gold);
}

PermutationResult permutation_test(std::span<const double> a, std::span<const double> b, std::size_t permutations,
                                   Rng& rng) {
    require(!a.empty() && !b.empty(), "permutation test needs two non-empty samples");
    require(permutations > 0, "permutation count must be positive");
    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double total = std::accumulate(pooled.begin(), pooled.end(), 0.0);
    auto diff = [&](double sum_a) { return sum_a / na - (total - sum_a) / nb; };

    PermutationResult r;
    r.permutations = permutations;
    r.observed = diff(std::accumulate(a.begin(), a.end(), 0.0));
    std::size_t at_most = 0;
    for (std::size_t p = 0; p < permutations; ++p) {
        rng.shuffle(std::span(pooled));
        const double d = diff(std::accumulate(pooled.begin(), pooled.begin() + static_cast<std::ptrdiff_t>(a.size()), 0.0));
        at_most += d <= r.observed + 1e-12;
    }
    r.p_value = static_cast<double>(1 + at_most) / static_cast<double>(1 + permutations);
    return r;
}

}  // namespace advgen::eval
