#pragma once

#include <span>
#include <string>
#include <vector>

#include "advgen/core/label.hpp"
#include "advgen/core/rng.hpp"

namespace advgen::eval {

struct ScoredExample {
    std::string text;
    Label gold = Label::benign;
    double score = 0.0;
};

/// Mann-Whitney U over n_pos * n_neg; tied scores count 1/2.
double roc_auc(std::span<const ScoredExample> examples);
double roc_auc(std::span<const double> scores, std::span<const Label> gold);

struct PermutationResult {
    double observed = 0.0;  // mean(a) - mean(b)
    double p_value = 1.0;
    std::size_t permutations = 0;
};

/// One-sided test of mean(a) < mean(b) by relabeling the pooled values.
/// p = (1 + #{permuted difference <= observed}) / (1 + permutations).
PermutationResult permutation_test(std::span<const double> a, std::span<const double> b, std::size_t permutations,
                                   Rng& rng);

}  // namespace advgen::eval
