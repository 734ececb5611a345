#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "advgen/core/rng.hpp"
#include "advgen/lm/vocabulary.hpp"

namespace advgen::lm {

inline constexpr double kDefaultTemperature = 0.9;

/// Below this temperature sampling resolves to the exact argmax.
inline constexpr double kArgmaxTemperature = 1e-6;

/// Indices of the k largest entries, largest first; ties go to the lower index.
std::vector<std::size_t> top_k_indices(std::span<const double> scores, std::size_t k);

/// Keeps the k best entries, divides them by `temperature`, renormalizes and
/// draws one index. k == 1 and near-zero temperature return the argmax without
/// consuming randomness.
std::size_t sample_top_k(std::span<const double> logprobs, std::size_t k, double temperature, Rng& rng);

/// Numerically stable log(sum(exp(x))).
double logsumexp(std::span<const double> xs);

}  // namespace advgen::lm
