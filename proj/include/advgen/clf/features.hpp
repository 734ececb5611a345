#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace advgen::clf {

/// Character n-gram range plus hashing dimension.
struct FeatureSpace {
    int n_min = 2;
    int n_max = 5;
    std::uint32_t dimension = 1u << 18;

    void validate() const;
    friend bool operator==(const FeatureSpace&, const FeatureSpace&) = default;
};

/// (index, count) pairs sorted by index, no duplicates.
using SparseVector = std::vector<std::pair<std::uint32_t, double>>;

std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// Counts of byte n-grams of lengths n_min..n_max over the lowercased text,
/// hashed with FNV-1a 64 modulo the dimension.
SparseVector featurize(std::string_view text, const FeatureSpace& space);

double dot(const SparseVector& x, const std::vector<double>& w);

}  // namespace advgen::clf
