#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "advgen/core/error.hpp"
#include "advgen/core/io.hpp"
#include "advgen/core/rng.hpp"

namespace advgen::data {

struct TfidfOptions {
    bool bigrams = true;
};

/// Word unigram (+ bigram) terms of a text; punctuation tokens are dropped.
std::vector<std::string> similarity_terms(std::string_view text, const TfidfOptions& options = {});

/// Smoothed inverse document frequencies: idf(t) = ln((1 + N) / (1 + df(t))) + 1.
class IdfTable {
public:
    static IdfTable build(std::span<const std::string> documents, const TfidfOptions& options = {});

    /// Every term weighs 1.
    static IdfTable uniform(const TfidfOptions& options = {});

    double idf(const std::string& term) const;
    const TfidfOptions& options() const noexcept { return options_; }
    std::size_t documents() const noexcept { return n_docs_; }

private:
    TfidfOptions options_;
    std::size_t n_docs_ = 0;
    bool uniform_ = false;
    std::unordered_map<std::string, std::size_t> df_;
};

/// L2-normalized tf-idf vector keyed by term.
using TermVector = std::vector<std::pair<std::string, double>>;

TermVector tfidf_vector(std::string_view text, const IdfTable& idf);
double cosine(const TermVector& a, const TermVector& b);

/// Cosine of tf-idf vectors in [0, 1]; 0 when either side has no terms.
double tfidf_cosine(std::string_view a, std::string_view b, const IdfTable& idf);

struct SplitResult {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    std::vector<std::size_t> dropped;  // conflicted with a test item
    double max_cross_similarity = 0.0;
    double threshold = 0.7;
    std::size_t requested_test = 0;

    double achieved_fraction(std::size_t total) const {
        return total == 0 ? 0.0 : static_cast<double>(test.size()) / static_cast<double>(total);
    }
};

class SplitInfeasible : public Error {
public:
    SplitInfeasible(SplitResult partial, double achieved);
    const SplitResult& partial() const noexcept { return partial_; }
    double achieved_fraction() const noexcept { return achieved_; }

private:
    SplitResult partial_;
    double achieved_;
};

inline constexpr double kDefaultSplitThreshold = 0.7;

/// Greedy split. Items are visited in seeded random order; each accepted test
/// item removes from train every record whose similarity to it exceeds the
/// threshold. A pairwise pass then checks the result. Fewer test items than
/// requested raises SplitInfeasible carrying the partial split.
SplitResult make_split(std::span<const std::string> texts, double test_fraction, double threshold, Rng& rng,
                       const TfidfOptions& options = {});

/// Largest train/test similarity, brute force over all pairs.
double max_cross_similarity(std::span<const std::string> texts, std::span<const std::size_t> train,
                            std::span<const std::size_t> test, const IdfTable& idf);

struct SimilarPair {
    std::size_t a = 0;
    std::size_t b = 0;
    double similarity = 0.0;
};

/// Some pair (a[i], b[j]) with similarity above `threshold`, if any. The idf
/// table is built over both lists together.
std::optional<SimilarPair> find_similar_pair(std::span<const std::string> a, std::span<const std::string> b,
                                             double threshold, const TfidfOptions& options = {});

json to_json(const SplitResult& s);
SplitResult split_from_json(const json& j);

}  // namespace advgen::data
