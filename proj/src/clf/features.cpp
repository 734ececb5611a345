#include "advgen/clf/features.hpp"

#include <algorithm>
#include <string>

#include "advgen/core/error.hpp"

namespace advgen::clf {

void FeatureSpace::validate() const {
    require(n_min >= 1, "feature n_min must be >= 1");
    require(n_max >= n_min, "feature n_max must be >= n_min");
    require(dimension >= 1, "feature dimension must be >= 1");
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

SparseVector featurize(std::string_view text, const FeatureSpace& space) {
    space.validate();
    std::string lower(text);
    for (char& c : lower) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }

    std::vector<std::uint32_t> hits;
    for (int n = space.n_min; n <= space.n_max; ++n) {
        const auto len = static_cast<std::size_t>(n);
        if (lower.size() < len) break;
        for (std::size_t i = 0; i + len <= lower.size(); ++i) {
            hits.push_back(static_cast<std::uint32_t>(fnv1a64(std::string_view(lower).substr(i, len)) %
                                                      space.dimension));
        }
    }
    std::sort(hits.begin(), hits.end());

    SparseVector out;
    for (auto idx : hits) {
        if (!out.empty() && out.back().first == idx) {
            out.back().second += 1.0;
        } else {
            out.emplace_back(idx, 1.0);
        }
    }
    return out;
}

double dot(const SparseVector& x, const std::vector<double>& w) {
    double s = 0.0;
    for (const auto& [i, v] : x) s += w[i] * v;
    return s;
}

}  // namespace advgen::clf
