#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"

#include "advgen/annot/agreement.hpp"
#include "advgen/annot/record.hpp"
#include "advgen/core/error.hpp"
#include "advgen/core/rng.hpp"

using namespace advgen;
using namespace advgen::annot;

namespace {

// Pairwise definitions, computed pair by pair.
double oracle_kappa(const std::vector<std::vector<std::size_t>>& labels, std::size_t categories) {
    double agree = 0.0, pairs = 0.0;
    std::vector<double> marg(categories, 0.0);
    double total = 0.0;
    for (const auto& row : labels) {
        for (std::size_t a = 0; a < row.size(); ++a) {
            marg[row[a]] += 1;
            total += 1;
            for (std::size_t b = 0; b < row.size(); ++b) {
                if (a == b) continue;
                pairs += 1;
                agree += row[a] == row[b];
            }
        }
    }
    const double p_bar = agree / pairs;
    double p_e = 0;
    for (double m : marg) p_e += (m / total) * (m / total);
    return (p_bar - p_e) / (1 - p_e);
}

double oracle_alpha(const std::vector<std::vector<double>>& units, bool interval) {
    auto delta = [&](double a, double b) { return interval ? (a - b) * (a - b) : (a == b ? 0.0 : 1.0); };
    std::vector<double> pooled;
    double within = 0.0;
    for (const auto& u : units) {
        if (u.size() < 2) continue;
        pooled.insert(pooled.end(), u.begin(), u.end());
        double s = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            for (std::size_t j = 0; j < u.size(); ++j) {
                if (i != j) s += delta(u[i], u[j]);
            }
        }
        within += s / static_cast<double>(u.size() - 1);
    }
    const double n = static_cast<double>(pooled.size());
    double between = 0.0;
    for (std::size_t i = 0; i < pooled.size(); ++i) {
        for (std::size_t j = 0; j < pooled.size(); ++j) {
            if (i != j) between += delta(pooled[i], pooled[j]);
        }
    }
    return 1.0 - (n - 1.0) * within / between;
}

AnnotationRecord ann(std::string item, std::string who, int ai, int human, Author author = Author::human,
                     Intent intent = Intent::benign) {
    AnnotationRecord r;
    r.item_id = std::move(item);
    r.annotator_id = std::move(who);
    r.harmful_if_ai = ai;
    r.harmful_if_human = human;
    r.human_or_ai = author;
    r.harmful_intent = intent;
    return r;
}

}  // namespace

TEST_CASE("toxicity_class examples") {
    CHECK(toxicity_class(1, 2) == ToxicityClass::non_toxic);
    CHECK(toxicity_class(3, 1) == ToxicityClass::ambiguous);
    CHECK(toxicity_class(2, 5) == ToxicityClass::toxic);
    CHECK_THROWS_AS(toxicity_class(0, 2), Error);
    CHECK_THROWS_AS(toxicity_class(2, 6), Error);
}

TEST_CASE("property: toxicity_class is monotone in each score") {
    for (int a = 1; a <= 5; ++a) {
        for (int b = 1; b <= 5; ++b) {
            const auto c = static_cast<int>(toxicity_class(a, b));
            if (a < 5) CHECK(static_cast<int>(toxicity_class(a + 1, b)) >= c);
            if (b < 5) CHECK(static_cast<int>(toxicity_class(a, b + 1)) >= c);
        }
    }
}

TEST_CASE("fleiss_kappa examples") {
    auto perfect = AnnotationMatrix::from_labels(
        {{0, 0, 0}, {1, 1, 1}, {0, 0, 0}, {1, 1, 1}, {0, 0, 0}, {1, 1, 1}, {0, 0, 0}, {1, 1, 1}, {0, 0, 0}, {1, 1, 1}},
        2);
    CHECK(fleiss_kappa(perfect).value == 1.0);
    CHECK_FALSE(fleiss_kappa(perfect).degenerate);

    // Rows (2,1) and (1,2): P_bar = 1/3, P_e = 1/2.
    AnnotationMatrix m{{{2, 1}, {1, 2}}, 3};
    CHECK(std::abs(fleiss_kappa(m).value - (-1.0 / 3.0)) < 1e-9);

    AnnotationMatrix one_cat{{{3, 0}, {3, 0}}, 3};
    auto d = fleiss_kappa(one_cat);
    CHECK(d.degenerate);
    CHECK(d.value == 1.0);

    CHECK_THROWS_AS(fleiss_kappa(AnnotationMatrix{{{3, 0}}, 3}), Error);
    CHECK_THROWS_AS(fleiss_kappa(AnnotationMatrix{{{3, 0}, {1, 1}}, 3}), Error);
}

TEST_CASE("fleiss_kappa: random labels are near zero and match the pairwise oracle") {
    Rng rng(42);
    std::vector<std::vector<std::size_t>> labels(1000);
    for (auto& row : labels) {
        for (int k = 0; k < 3; ++k) row.push_back(rng.uniform_index(3));
    }
    const double k = fleiss_kappa(AnnotationMatrix::from_labels(labels, 3)).value;
    CHECK(std::abs(k) < 0.1);
    CHECK(std::abs(k - oracle_kappa(labels, 3)) < 1e-12);

    for (int trial = 0; trial < 50; ++trial) {
        const auto cats = 2 + rng.uniform_index(4);
        const auto raters = 2 + rng.uniform_index(4);
        std::vector<std::vector<std::size_t>> l(2 + rng.uniform_index(30));
        for (auto& row : l) {
            const auto base = rng.uniform_index(cats);
            for (std::size_t r = 0; r < raters; ++r) row.push_back(rng.uniform01() < 0.6 ? base : rng.uniform_index(cats));
        }
        auto res = fleiss_kappa(AnnotationMatrix::from_labels(l, cats));
        if (!res.degenerate) CHECK(std::abs(res.value - oracle_kappa(l, cats)) < 1e-9);
    }
}

TEST_CASE("krippendorff_alpha hand-built coincidence matrices") {
    // (1,1),(1,2): o11 = 2, o12 = o21 = 1; n1 = 3, n2 = 1, n = 4.
    // D_o = 2/4, D_e = 2*3*1/(4*3) = 1/2, alpha = 0.
    auto a = krippendorff_alpha({{1, 1}, {1, 2}}, Metric::nominal);
    CHECK(std::abs(a.value - 0.0) < 1e-9);

    // (1,1),(2,2),(1,2): o11 = o22 = 2, o12 = o21 = 1; n1 = n2 = 3, n = 6.
    // D_o = 2/6, D_e = 2*9/30 = 3/5, alpha = 1 - (1/3)/(3/5) = 4/9.
    auto b = krippendorff_alpha({{1, 1}, {2, 2}, {1, 2}}, Metric::nominal);
    CHECK(std::abs(b.value - 4.0 / 9.0) < 1e-9);

    // Interval, values 1 and 3 in the same layout: every delta is 4, so the
    // ratio and alpha are unchanged.
    auto c = krippendorff_alpha({{1, 1}, {3, 3}, {1, 3}}, Metric::interval);
    CHECK(std::abs(c.value - 4.0 / 9.0) < 1e-9);

    // Interval, three values: (1,2),(2,3),(1,3) plus a unit of one value ignored.
    // o12=o21=o23=o32=o13=o31=1; n_c = 2 each, n = 6.
    // D_o = (2*1 + 2*1 + 2*4)/6 = 2; D_e = (4*(2*1 + 2*1 + 2*4))/30 = 48/30.
    auto d = krippendorff_alpha({{1, 2}, {2, 3}, {1, 3}, {5}}, Metric::interval);
    CHECK(std::abs(d.value - (1.0 - 2.0 / (48.0 / 30.0))) < 1e-9);
}

TEST_CASE("krippendorff_alpha: perfect agreement, degeneracy, oracle, permutation") {
    auto p = krippendorff_alpha({{1, 1, 1}, {2, 2}, {3, 3, 3}}, Metric::interval);
    CHECK(p.value == 1.0);
    CHECK_FALSE(p.degenerate);
    auto d = krippendorff_alpha({{2, 2}, {2, 2, 2}}, Metric::nominal);
    CHECK(d.degenerate);
    CHECK(d.value == 1.0);
    CHECK_THROWS_AS(krippendorff_alpha({{1}, {2}}, Metric::nominal), Error);

    Rng rng(9);
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<std::vector<double>> units(1 + rng.uniform_index(25));
        for (auto& u : units) {
            const auto m = rng.uniform_index(5);
            const double base = 1.0 + static_cast<double>(rng.uniform_index(5));
            for (std::size_t k = 0; k < m; ++k) {
                u.push_back(rng.uniform01() < 0.5 ? base : 1.0 + static_cast<double>(rng.uniform_index(5)));
            }
        }
        units.push_back({1, 4});
        for (auto metric : {Metric::nominal, Metric::interval}) {
            auto a = krippendorff_alpha(units, metric);
            if (a.degenerate) continue;
            CHECK(std::abs(a.value - oracle_alpha(units, metric == Metric::interval)) < 1e-9);
            // Rater identity is irrelevant: shuffling inside units changes nothing.
            auto shuffled = units;
            for (auto& u : shuffled) rng.shuffle(std::span(u));
            rng.shuffle(std::span(shuffled));
            CHECK(std::abs(krippendorff_alpha(shuffled, metric).value - a.value) < 1e-12);
        }
        // Nominal alpha ignores what the categories are called.
        auto relabeled = units;
        for (auto& u : relabeled) {
            for (auto& x : u) x = 10.0 - 2.0 * x;
        }
        auto a = krippendorff_alpha(units, Metric::nominal);
        CHECK(std::abs(krippendorff_alpha(relabeled, Metric::nominal).value - a.value) < 1e-12);
    }
}

TEST_CASE("property: kappa invariant under category relabeling and rater permutation") {
    Rng rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<std::vector<std::size_t>> l(5 + rng.uniform_index(20));
        for (auto& row : l) {
            for (int r = 0; r < 3; ++r) row.push_back(rng.uniform_index(3));
        }
        const double k = fleiss_kappa(AnnotationMatrix::from_labels(l, 3)).value;
        std::vector<std::size_t> perm{0, 1, 2};
        rng.shuffle(std::span(perm));
        auto relabeled = l;
        for (auto& row : relabeled) {
            for (auto& c : row) c = perm[c];
            rng.shuffle(std::span(row));
        }
        CHECK(std::abs(fleiss_kappa(AnnotationMatrix::from_labels(relabeled, 3)).value - k) < 1e-12);
    }
}

TEST_CASE("property: kappa is 1 exactly when all items are unanimous") {
    Rng rng(6);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::vector<std::size_t>> l(4 + rng.uniform_index(10));
        bool unanimous = true;
        for (auto& row : l) {
            const auto c = rng.uniform_index(3);
            for (int r = 0; r < 3; ++r) row.push_back(rng.uniform01() < 0.9 ? c : rng.uniform_index(3));
            unanimous = unanimous && std::all_of(row.begin(), row.end(), [&](auto x) { return x == row[0]; });
        }
        auto k = fleiss_kappa(AnnotationMatrix::from_labels(l, 3));
        if (k.degenerate) continue;
        CHECK((std::abs(k.value - 1.0) < 1e-12) == unanimous);
    }
}

TEST_CASE("property: adding a noise annotation does not raise interval alpha") {
    const std::vector<std::vector<double>> base{{1, 1, 1}, {2, 2, 2}, {4, 4, 4}, {5, 5, 5}, {3, 3, 3}};
    const double a0 = krippendorff_alpha(base, Metric::interval).value;
    for (std::size_t unit = 0; unit < base.size(); ++unit) {
        for (double noise = 1; noise <= 5; ++noise) {
            auto noisy = base;
            noisy[unit].push_back(noise);
            CHECK(krippendorff_alpha(noisy, Metric::interval).value <= a0 + 1e-12);
        }
    }
}

TEST_CASE("agreement_summary") {
    using T = ToxicityClass;
    auto s = agreement_summary({{T::toxic, T::toxic, T::toxic}, {T::non_toxic, T::non_toxic, T::non_toxic}});
    CHECK(s.all_agree_pct == 100.0);
    CHECK(s.majority_pct == 100.0);

    s = agreement_summary({{T::toxic, T::toxic, T::ambiguous}});
    CHECK(s.all_agree_pct == 0.0);
    CHECK(s.majority_pct == 100.0);

    // 10 items: 4 unanimous, 4 with a 2/3 majority, 2 with all different.
    // Hand count: all = 40%, majority = 80%. One 2-label item is excluded.
    std::vector<std::vector<T>> items{
        {T::toxic, T::toxic, T::toxic},
        {T::ambiguous, T::ambiguous, T::ambiguous},
        {T::non_toxic, T::non_toxic, T::non_toxic},
        {T::toxic, T::toxic, T::toxic},
        {T::toxic, T::non_toxic, T::toxic},
        {T::non_toxic, T::ambiguous, T::ambiguous},
        {T::non_toxic, T::non_toxic, T::toxic},
        {T::ambiguous, T::toxic, T::toxic},
        {T::toxic, T::ambiguous, T::non_toxic},
        {T::non_toxic, T::toxic, T::ambiguous},
        {T::toxic, T::toxic},
    };
    s = agreement_summary(items);
    CHECK(s.items == 10);
    CHECK(s.excluded == 1);
    CHECK(s.warnings.size() == 1);
    CHECK(s.all_agree_pct == doctest::Approx(40.0));
    CHECK(s.majority_pct == doctest::Approx(80.0));
}

TEST_CASE("aggregate_labels and rates") {
    using T = ToxicityClass;
    bool tie = false;
    std::vector<T> a{T::toxic, T::toxic, T::non_toxic};
    CHECK(majority_class(a, &tie) == T::toxic);
    CHECK_FALSE(tie);
    std::vector<T> b{T::toxic, T::ambiguous, T::non_toxic};
    CHECK(majority_class(b, &tie) == T::ambiguous);
    CHECK(tie);

    // Fixture: 8 items x 3 annotators.
    // toxic items: i0 (harm x3), i1 (harm x2), i2 (benign x2): 2 of 3 are hate.
    // i3 all-different tie, i4..i7 non-toxic. Majority human on all but i0.
    std::vector<AnnotationRecord> rs;
    auto add3 = [&](const std::string& id, std::array<int, 3> scores, std::array<Intent, 3> intents,
                    std::array<Author, 3> authors) {
        for (int k = 0; k < 3; ++k) rs.push_back(ann(id, "a" + std::to_string(k), scores[k], 1, authors[k], intents[k]));
    };
    const auto H = Author::human, A = Author::ai;
    add3("i0", {5, 4, 4}, {Intent::harm, Intent::harm, Intent::harm}, {A, A, H});
    add3("i1", {4, 5, 2}, {Intent::harm, Intent::unsure, Intent::harm}, {H, H, A});
    add3("i2", {4, 4, 4}, {Intent::benign, Intent::benign, Intent::harm}, {H, A, H});
    add3("i3", {5, 3, 1}, {Intent::harm, Intent::benign, Intent::unsure}, {H, H, H});
    for (int i = 4; i < 8; ++i) {
        add3("i" + std::to_string(i), {1, 2, 1}, {Intent::benign, Intent::benign, Intent::benign}, {H, H, A});
    }
    const auto items = aggregate_labels(rs);
    REQUIRE(items.size() == 8);
    CHECK(items[0].toxicity == T::toxic);
    CHECK(items[0].author == Author::ai);
    CHECK(items[3].toxicity == T::ambiguous);
    CHECK(items[3].toxicity_tie);
    const auto rates = label_rates(items);
    CHECK(rates.toxic_pct == doctest::Approx(100.0 * 3 / 8));
    CHECK(rates.ambiguous_pct == doctest::Approx(100.0 / 8));
    CHECK(rates.non_toxic_pct == doctest::Approx(50.0));
    CHECK(rates.human_majority_pct == doctest::Approx(100.0 * 7 / 8));
    CHECK(rates.hate_among_toxic_pct == doctest::Approx(200.0 / 3));
    CHECK(rates.toxicity_ties == 1);

    auto report = agreement_report(rs);
    CHECK(report["items"] == 8);
    CHECK(report["fleiss_kappa"]["raters"] == 3);
    CHECK(report["summary"]["items"] == 8);
}

TEST_CASE("annotation ingest from CSV and JSONL") {
    const std::string csv =
        "item_id,annotator_id,humanOrAI,harmfulIfAI,harmfulIfHuman,harmfulIntent,posStereo,lewd,whichGroup,"
        "groupFraming,factOrOpinion\n"
        "1,w1,AI,4,3,harm,false,0,women;black,\"moral judgement;direct reference\",opinion\n"
        "1,w2,human,2,2,benign,true,1,women,,fact\n";
    auto rs = parse_annotations_csv(csv);
    REQUIRE(rs.size() == 2);
    CHECK(rs[0].human_or_ai == Author::ai);
    CHECK(rs[0].which_group == std::vector<std::string>{"women", "black"});
    CHECK(rs[0].group_framing.count("moral judgement") == 1);
    CHECK(rs[1].pos_stereo);
    CHECK(rs[1].lewd);
    CHECK(toxicity_class(rs[0]) == ToxicityClass::toxic);

    std::string jsonl;
    for (const auto& r : rs) jsonl += r.to_json().dump() + "\n";
    CHECK(parse_annotations_jsonl(jsonl) == rs);

    CHECK_THROWS_AS(parse_annotations_csv("item_id,annotator_id,humanOrAI,harmfulIfAI,harmfulIfHuman,harmfulIntent\n"
                                          "1,a,human,6,1,benign\n"),
                    Error);
    CHECK_THROWS_AS(parse_annotations_jsonl(R"({"item_id":"1","annotator_id":"a","humanOrAI":"human",)"
                                            R"("harmfulIfAI":1,"harmfulIfHuman":1,"harmfulIntent":"benign",)"
                                            R"("groupFraming":["made up tag"]})"),
                    Error);
    const std::set<std::string> custom{"made up tag"};
    CHECK(parse_annotations_jsonl(R"({"item_id":1,"annotator_id":"a","humanOrAI":"human",)"
                                  R"("harmfulIfAI":1,"harmfulIfHuman":1,"harmfulIntent":"benign",)"
                                  R"("groupFraming":["made up tag"]})",
                                  custom)
              .size() == 1);
}
