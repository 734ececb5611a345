#include "advgen/data/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "advgen/lm/tokenizer.hpp"

namespace advgen::data {

std::vector<std::string> similarity_terms(std::string_view text, const TfidfOptions& options) {
    std::vector<std::string> words;
    for (auto& tok : lm::split_tokens(text)) {
        if (tok == lm::Vocabulary::kNewline) continue;
        if (tok.size() == 1 && lm::is_punctuation(tok[0])) continue;
        words.push_back(std::move(tok));
    }
    std::vector<std::string> terms = words;
    if (options.bigrams) {
        for (std::size_t i = 0; i + 1 < words.size(); ++i) terms.push_back(words[i] + " " + words[i + 1]);
    }
    return terms;
}

IdfTable IdfTable::build(std::span<const std::string> documents, const TfidfOptions& options) {
    IdfTable t;
    t.options_ = options;
    t.n_docs_ = documents.size();
    for (const auto& doc : documents) {
        auto terms = similarity_terms(doc, options);
        std::sort(terms.begin(), terms.end());
        terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
        for (auto& term : terms) ++t.df_[std::move(term)];
    }
    return t;
}

IdfTable IdfTable::uniform(const TfidfOptions& options) {
    IdfTable t;
    t.options_ = options;
    t.uniform_ = true;
    return t;
}

double IdfTable::idf(const std::string& term) const {
    if (uniform_) return 1.0;
    std::size_t df = 0;
    if (auto it = df_.find(term); it != df_.end()) df = it->second;
    return std::log((1.0 + static_cast<double>(n_docs_)) / (1.0 + static_cast<double>(df))) + 1.0;
}

TermVector tfidf_vector(std::string_view text, const IdfTable& idf) {
    std::map<std::string, double> tf;
    for (auto& term : similarity_terms(text, idf.options())) tf[std::move(term)] += 1.0;
    TermVector v;
    v.reserve(tf.size());
    double norm = 0.0;
    for (auto& [term, count] : tf) {
        const double w = count * idf.idf(term);
        norm += w * w;
        v.emplace_back(term, w);
    }
    if (norm > 0.0) {
        norm = std::sqrt(norm);
        for (auto& [term, w] : v) w /= norm;
    }
    return v;
}

double cosine(const TermVector& a, const TermVector& b) {
    double s = 0.0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (i->first < j->first) {
            ++i;
        } else if (j->first < i->first) {
            ++j;
        } else {
            s += i->second * j->second;
            ++i;
            ++j;
        }
    }
    return std::clamp(s, 0.0, 1.0);
}

double tfidf_cosine(std::string_view a, std::string_view b, const IdfTable& idf) {
    return cosine(tfidf_vector(a, idf), tfidf_vector(b, idf));
}

SplitInfeasible::SplitInfeasible(SplitResult partial, double achieved)
    : Error(ErrorCode::split_infeasible,
            "similarity constraint allows only a test fraction of " + std::to_string(achieved)),
      partial_(std::move(partial)),
      achieved_(achieved) {}

double max_cross_similarity(std::span<const std::string> texts, std::span<const std::size_t> train,
                            std::span<const std::size_t> test, const IdfTable& idf) {
    std::vector<TermVector> test_vecs;
    test_vecs.reserve(test.size());
    for (auto t : test) test_vecs.push_back(tfidf_vector(texts[t], idf));
    double best = 0.0;
    for (auto r : train) {
        const auto v = tfidf_vector(texts[r], idf);
        for (const auto& tv : test_vecs) best = std::max(best, cosine(v, tv));
    }
    return best;
}

SplitResult make_split(std::span<const std::string> texts, double test_fraction, double threshold, Rng& rng,
                       const TfidfOptions& options) {
    require(test_fraction > 0.0 && test_fraction < 1.0, "test_fraction must be in (0, 1)");
    require(!texts.empty(), "cannot split an empty record set");
    const std::size_t n = texts.size();
    const auto idf = IdfTable::build(texts, options);

    // Term-id sparse vectors and postings for neighbour lookup.
    std::unordered_map<std::string, std::uint32_t> term_ids;
    std::vector<std::vector<std::pair<std::uint32_t, double>>> vecs(n);
    std::vector<std::vector<std::uint32_t>> postings;
    for (std::size_t d = 0; d < n; ++d) {
        for (const auto& [term, w] : tfidf_vector(texts[d], idf)) {
            auto [it, inserted] = term_ids.emplace(term, static_cast<std::uint32_t>(postings.size()));
            if (inserted) postings.emplace_back();
            postings[it->second].push_back(static_cast<std::uint32_t>(d));
            vecs[d].emplace_back(it->second, w);
        }
        // Sorted by term id for the lookup below; tfidf_vector orders by term text.
        std::sort(vecs[d].begin(), vecs[d].end());
    }

    SplitResult result;
    result.threshold = threshold;
    result.requested_test = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n))));

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    rng.shuffle(std::span(order));

    enum class State : unsigned char { train, test, dropped };
    std::vector<State> state(n, State::train);
    std::vector<double> acc(n, 0.0);
    std::vector<std::uint32_t> touched;

    std::size_t n_test = 0;
    for (std::size_t cand : order) {
        if (n_test == result.requested_test) break;
        if (state[cand] != State::train) continue;
        state[cand] = State::test;
        ++n_test;

        for (const auto& [term, w] : vecs[cand]) {
            for (auto d : postings[term]) {
                if (acc[d] == 0.0) touched.push_back(d);
                acc[d] += w * vecs[d][std::lower_bound(vecs[d].begin(), vecs[d].end(),
                                                         std::pair<std::uint32_t, double>{term, -1.0})
                                       - vecs[d].begin()]
                                  .second;
            }
        }
        for (auto d : touched) {
            if (acc[d] > threshold && state[d] == State::train) state[d] = State::dropped;
            acc[d] = 0.0;
        }
        touched.clear();
    }

    for (std::size_t i = 0; i < n; ++i) {
        switch (state[i]) {
            case State::train: result.train.push_back(i); break;
            case State::test: result.test.push_back(i); break;
            case State::dropped: result.dropped.push_back(i); break;
        }
    }

    result.max_cross_similarity = max_cross_similarity(texts, result.train, result.test, idf);
    if (result.max_cross_similarity > threshold + 1e-12) {
        fail(ErrorCode::validation, "split verification failed: cross similarity " +
                                        std::to_string(result.max_cross_similarity));
    }
    if (result.test.size() < result.requested_test) {
        const double achieved = result.achieved_fraction(n);
        throw SplitInfeasible(std::move(result), achieved);
    }
    return result;
}

std::optional<SimilarPair> find_similar_pair(std::span<const std::string> a, std::span<const std::string> b,
                                             double threshold, const TfidfOptions& options) {
    std::vector<std::string> all(a.begin(), a.end());
    all.insert(all.end(), b.begin(), b.end());
    const auto idf = IdfTable::build(all, options);

    // Postings over `a`: term -> (doc, weight).
    std::unordered_map<std::string, std::vector<std::pair<std::size_t, double>>> postings;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (auto& [term, w] : tfidf_vector(a[i], idf)) postings[term].emplace_back(i, w);
    }
    std::vector<double> acc(a.size(), 0.0);
    std::vector<std::size_t> touched;
    for (std::size_t j = 0; j < b.size(); ++j) {
        for (const auto& [term, w] : tfidf_vector(b[j], idf)) {
            auto it = postings.find(term);
            if (it == postings.end()) continue;
            for (const auto& [i, wa] : it->second) {
                if (acc[i] == 0.0) touched.push_back(i);
                acc[i] += w * wa;
            }
        }
        std::optional<SimilarPair> hit;
        for (auto i : touched) {
            if (!hit && acc[i] > threshold) hit = SimilarPair{i, j, std::min(acc[i], 1.0)};
            acc[i] = 0.0;
        }
        touched.clear();
        if (hit) return hit;
    }
    return std::nullopt;
}

json to_json(const SplitResult& s) {
    return {{"train", s.train},
            {"test", s.test},
            {"dropped", s.dropped},
            {"threshold", s.threshold},
            {"max_cross_similarity", s.max_cross_similarity},
            {"requested_test", s.requested_test}};
}

SplitResult split_from_json(const json& j) {
    try {
        SplitResult s;
        s.train = j.at("train").get<std::vector<std::size_t>>();
        s.test = j.at("test").get<std::vector<std::size_t>>();
        s.dropped = j.value("dropped", std::vector<std::size_t>{});
        s.threshold = j.value("threshold", kDefaultSplitThreshold);
        s.max_cross_similarity = j.value("max_cross_similarity", 0.0);
        s.requested_test = j.value("requested_test", s.test.size());
        return s;
    } catch (const json::exception& e) {
        fail(ErrorCode::validation, std::string("bad split file: ") + e.what());
    }
}

}  // namespace advgen::data
