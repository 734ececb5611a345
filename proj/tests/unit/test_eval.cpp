#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"

#include "advgen/core/error.hpp"
#include "advgen/core/rng.hpp"
#include "advgen/eval/auc.hpp"
#include "advgen/eval/compare.hpp"
#include "advgen/eval/corpus_reports.hpp"
#include "advgen/eval/finetune.hpp"
#include "advgen/lm/ngram_model.hpp"
#include "advgen/lm/tokenizer.hpp"
#include "support/finetune_fixture.hpp"

using namespace advgen;
using namespace advgen::eval;
using annot::ToxicityClass;

namespace {

double brute_auc(const std::vector<double>& s, const std::vector<Label>& g) {
    double wins = 0, pairs = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (g[i] != Label::toxic) continue;
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (g[j] != Label::benign) continue;
            pairs += 1;
            wins += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
        }
    }
    return wins / pairs;
}

data::GenerationRecord rec(std::string gen, data::GenerationMethod m, Label label, std::string group = "g",
                           std::optional<double> pred = std::nullopt) {
    data::GenerationRecord r;
    r.prompt = "- x\n-";
    r.generation = std::move(gen);
    r.method = m;
    r.prompt_label = label;
    r.group = std::move(group);
    r.classifier_prediction = pred;
    return r;
}

}  // namespace

TEST_CASE("roc_auc examples") {
    std::vector<double> s{0.1, 0.2, 0.8, 0.9};
    std::vector<Label> g{Label::benign, Label::benign, Label::toxic, Label::toxic};
    CHECK(roc_auc(s, g) == 1.0);
    std::vector<double> eq(4, 0.3);
    CHECK(roc_auc(eq, g) == 0.5);

    // 6 examples with a tie across classes.
    std::vector<double> s6{0.9, 0.4, 0.4, 0.7, 0.2, 0.4};
    std::vector<Label> g6{Label::toxic, Label::toxic, Label::benign, Label::benign, Label::benign, Label::toxic};
    // Hand count over 9 pairs: 0.9 beats all 3; each 0.4 beats 0.2, ties 0.4, loses to 0.7.
    CHECK(std::abs(roc_auc(s6, g6) - (3.0 + 1.5 + 1.5) / 9.0) < 1e-12);
    CHECK(std::abs(roc_auc(s6, g6) - brute_auc(s6, g6)) < 1e-12);

    std::vector<Label> one(4, Label::toxic);
    CHECK_THROWS_AS(roc_auc(s, one), Error);
}

TEST_CASE("property: roc_auc equals the pairwise oracle, with ties") {
    Rng rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const auto n = 2 + rng.uniform_index(199);
        std::vector<double> s(n);
        std::vector<Label> g(n);
        const auto levels = 1 + rng.uniform_index(12);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = static_cast<double>(rng.uniform_index(levels)) / static_cast<double>(levels);
            g[i] = rng.uniform01() < 0.4 ? Label::toxic : Label::benign;
        }
        g[0] = Label::toxic;
        g[1] = Label::benign;
        const double a = roc_auc(s, g);
        CHECK(std::abs(a - brute_auc(s, g)) < 1e-12);
        // Strictly monotone transforms leave AUC unchanged.
        std::vector<double> t(n);
        for (std::size_t i = 0; i < n; ++i) t[i] = std::exp(3.0 * s[i]) - 7.0;
        CHECK(roc_auc(t, g) == a);
    }
}

TEST_CASE("permutation_test") {
    std::vector<double> low(30), high(30);
    Rng gen(1);
    for (auto& x : low) x = gen.uniform01();
    for (auto& x : high) x = 1.0 + gen.uniform01();
    Rng rng(2);
    auto r = permutation_test(low, high, 999, rng);
    CHECK(r.observed < 0);
    CHECK(r.p_value == doctest::Approx(1.0 / 1000.0));

    std::vector<double> same(30);
    for (auto& x : same) x = gen.uniform01();
    auto n = permutation_test(low, same, 999, rng);
    CHECK(n.p_value > 0.01);
    CHECK(n.p_value <= 1.0);
    CHECK_THROWS_AS(permutation_test(std::vector<double>{}, same, 10, rng), Error);
}

TEST_CASE("compare_methods: always-correct classifier never fools") {
    std::vector<data::GenerationRecord> rs;
    std::vector<HumanJudgment> h;
    for (int i = 0; i < 10; ++i) {
        const bool toxic = i % 2;
        rs.push_back(rec("x", data::GenerationMethod::alice, toxic ? Label::toxic : Label::benign, "g",
                         toxic ? 0.9 : 0.1));
        h.push_back({toxic ? ToxicityClass::toxic : ToxicityClass::non_toxic, toxic ? 4.0 : 1.0});
    }
    auto r = compare_methods(rs, h);
    REQUIRE(r.methods.size() == 1);
    CHECK(r.methods[0].fool_rate == 0.0);
    CHECK(r.methods[0].label_match_rate_toxic == 1.0);
    CHECK(r.methods[0].label_match_rate_benign == 1.0);
}

TEST_CASE("compare_methods: 20-record hand count") {
    using M = data::GenerationMethod;
    using T = ToxicityClass;
    struct Row {
        M m;
        Label prompt;
        T human;
        double score;
        double pred;
    };
    // ALICE: 6 toxic prompts (human: 3 toxic, 2 non-toxic, 1 ambiguous), 4 benign (human: 3 non-toxic, 1 toxic).
    // top-k: 5 toxic prompts (human: 4 toxic, 1 non-toxic), 5 benign (human: 5 non-toxic).
    const std::vector<Row> rows{
        {M::alice, Label::toxic, T::toxic, 4.0, 0.2},       // fooled
        {M::alice, Label::toxic, T::toxic, 5.0, 0.8},
        {M::alice, Label::toxic, T::toxic, 4.0, 0.3},       // fooled
        {M::alice, Label::toxic, T::non_toxic, 2.0, 0.1},
        {M::alice, Label::toxic, T::non_toxic, 1.0, 0.6},   // fooled
        {M::alice, Label::toxic, T::ambiguous, 3.0, 0.9},   // excluded from fool rate
        {M::alice, Label::benign, T::non_toxic, 1.0, 0.2},
        {M::alice, Label::benign, T::non_toxic, 2.0, 0.5},  // fooled: 0.5 counts as toxic
        {M::alice, Label::benign, T::non_toxic, 1.0, 0.4},
        {M::alice, Label::benign, T::toxic, 4.0, 0.7},
        {M::top_k, Label::toxic, T::toxic, 5.0, 0.9},
        {M::top_k, Label::toxic, T::toxic, 4.0, 0.9},
        {M::top_k, Label::toxic, T::toxic, 4.0, 0.4},       // fooled
        {M::top_k, Label::toxic, T::toxic, 5.0, 0.6},
        {M::top_k, Label::toxic, T::non_toxic, 2.0, 0.1},
        {M::top_k, Label::benign, T::non_toxic, 1.0, 0.1},
        {M::top_k, Label::benign, T::non_toxic, 1.0, 0.2},
        {M::top_k, Label::benign, T::non_toxic, 2.0, 0.3},
        {M::top_k, Label::benign, T::non_toxic, 1.0, 0.1},
        {M::top_k, Label::benign, T::non_toxic, 1.0, 0.2},
    };
    std::vector<data::GenerationRecord> rs;
    std::vector<HumanJudgment> h;
    for (const auto& r : rows) {
        rs.push_back(rec("text", r.m, r.prompt, "g", r.pred));
        h.push_back({r.human, r.score});
    }
    auto rep = compare_methods(rs, h);
    REQUIRE(rep.methods.size() == 2);
    const auto& a = rep.methods[0];
    const auto& k = rep.methods[1];
    CHECK(a.method == "alice");
    CHECK(a.label_match_rate_toxic == doctest::Approx(3.0 / 6));
    CHECK(a.label_match_rate_benign == doctest::Approx(3.0 / 4));
    CHECK(a.fool_denominator == 9);
    CHECK(a.fool_rate == doctest::Approx(4.0 / 9));
    CHECK(a.mean_human_toxicity_toxic_prompt == doctest::Approx(19.0 / 6));
    CHECK(a.mean_human_toxicity_benign_prompt == doctest::Approx(8.0 / 4));
    CHECK(k.method == "top-k");
    CHECK(k.label_match_rate_toxic == doctest::Approx(4.0 / 5));
    CHECK(k.label_match_rate_benign == doctest::Approx(1.0));
    CHECK(k.fool_rate == doctest::Approx(1.0 / 10));
    CHECK(k.mean_human_toxicity_toxic_prompt == doctest::Approx(20.0 / 5));
    CHECK(k.mean_human_toxicity == doctest::Approx(26.0 / 10));

    auto j = to_json(rep);
    CHECK(j["methods"][0].contains("mean_human_toxicity_toxic_prompt"));
    CHECK_FALSE(format_table(rep).empty());

    rs[0].classifier_prediction.reset();
    CHECK_THROWS_AS(compare_methods(rs, h), Error);
}

TEST_CASE("join_annotations keys items by record line") {
    std::vector<data::GenerationRecord> rs{rec("a", data::GenerationMethod::alice, Label::toxic),
                                           rec("b", data::GenerationMethod::top_k, Label::benign)};
    std::vector<annot::AnnotationRecord> anns;
    for (int k = 0; k < 3; ++k) {
        annot::AnnotationRecord a;
        a.item_id = "1";
        a.annotator_id = std::to_string(k);
        a.harmful_if_ai = 1 + k;
        a.harmful_if_human = 1;
        anns.push_back(a);
    }
    auto j = join_annotations(rs, anns);
    REQUIRE(j.records.size() == 1);
    CHECK(j.records[0].generation == "b");
    CHECK(j.human[0].toxicity == ToxicityClass::non_toxic);
    CHECK(j.human[0].toxicity_score == doctest::Approx(2.0));
    anns[0].item_id = "7";
    CHECK_THROWS_AS(join_annotations(rs, anns), Error);
}

TEST_CASE("finetune: zero epochs leave AUC unchanged") {
    auto f = testing::FinetuneFixture::make(3, 40, 40, 40);
    auto opt = testing::FinetuneFixture::options();
    opt.meta.epochs = 0;
    auto r = finetune_and_eval(f.base, f.train, f.eval_sets, opt);
    REQUIRE(r.rows.size() == 3);
    for (const auto& row : r.rows) CHECK(row.before == row.after);
}

TEST_CASE("finetune: shared generative process improves every eval set") {
    auto f = testing::FinetuneFixture::make(4);
    auto r = finetune_and_eval(f.base, f.train, f.eval_sets, testing::FinetuneFixture::options());
    for (const auto& row : r.rows) {
        CAPTURE(row.eval_set);
        CHECK(row.after > row.before);
    }
    CHECK(r.train_size == f.train.size());
}

TEST_CASE("finetune: ablation table shape and ordering") {
    auto f = testing::FinetuneFixture::make(5);
    Rng rng(1);
    auto t = finetune_ablation(f.base, f.train, f.eval_sets, testing::FinetuneFixture::options(), rng);
    CHECK(t.columns == std::vector<std::string>{"None", "ALICE", "top-k", "ALICE + top-k"});
    CHECK(t.train_sizes == std::vector<std::size_t>{0, 200, 200, 400});
    REQUIRE(t.auc.size() == 3);
    const auto& combined = t.auc[2];
    CHECK(combined[3] >= combined[1]);
    CHECK(combined[3] >= combined[2]);
    // Each single style helps on its own eval set more than the other style does.
    CHECK(t.auc[0][1] > t.auc[0][2]);
    CHECK(t.auc[1][2] > t.auc[1][1]);

    Rng again(1);
    auto t2 = finetune_ablation(f.base, f.train, f.eval_sets, testing::FinetuneFixture::options(), again);
    CHECK(to_json(t).dump() == to_json(t2).dump());
    CHECK(format_table(t) == format_table(t2));
}

TEST_CASE("finetune: contamination guard") {
    auto f = testing::FinetuneFixture::make(6, 20, 20, 20);
    f.eval_sets[1].examples.push_back({f.train[7].generation, f.train[7].prompt_label, 0.0});
    try {
        finetune_and_eval(f.base, f.train, f.eval_sets, testing::FinetuneFixture::options());
        FAIL("expected E_CONTAMINATION");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::contamination);
    }
    Rng rng(0);
    CHECK_THROWS_AS(finetune_ablation(f.base, f.train, f.eval_sets, testing::FinetuneFixture::options(), rng), Error);
}

TEST_CASE("perplexity_report") {
    CHECK(kPerplexityCutoff == 500.0);
    const std::vector<std::string> corpus{"the cat sat", "the dog sat", "a cat ran", "the cat ran"};
    auto model = lm::NGramModel::train(corpus, 2, 0.5);
    using M = data::GenerationMethod;
    std::vector<data::GenerationRecord> rs{
        rec("the cat sat", M::alice, Label::toxic, "a"),  rec("a dog ran", M::alice, Label::toxic, "a"),
        rec("the dog ran", M::top_k, Label::toxic, "a"),  rec("cat the a", M::top_k, Label::benign, "a"),
        rec("the cat ran", M::alice, Label::benign, "b"),
    };
    auto ppl = [&](const std::string& s) { return model.perplexity(lm::tokenize(s, model.vocabulary()).ids); };
    auto rows = perplexity_report(model, rs);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].group == "a");
    CHECK(rows[0].method == "alice");
    CHECK(rows[0].mean == doctest::Approx((ppl("the cat sat") + ppl("a dog ran")) / 2));
    CHECK(rows[1].mean == doctest::Approx((ppl("the dog ran") + ppl("cat the a")) / 2));
    CHECK(rows[2].mean == doctest::Approx(ppl("the cat ran")));

    auto none = perplexity_report(model, rs, 1.0);
    for (const auto& r : none) {
        CHECK(r.count == 0);
        CHECK(r.mean == 0.0);
    }
    CHECK(to_json(rows, 500.0)["cutoff"] == 500.0);
}

TEST_CASE("group_mention_rate") {
    using M = data::GenerationMethod;
    const std::map<std::string, std::vector<std::string>> terms{{"women", {"women", "woman"}},
                                                                {"middle eastern", {"middle eastern", "arab"}}};
    std::vector<data::GenerationRecord> all{rec("Women are here", M::alice, Label::toxic, "women"),
                                            rec("a woman spoke", M::alice, Label::toxic, "women")};
    CHECK(group_mention_rate(all, terms).rows[0].rate == 1.0);
    std::vector<data::GenerationRecord> none{rec("nobody here", M::alice, Label::toxic, "women"),
                                             rec("womenfolk", M::alice, Label::toxic, "women")};
    CHECK(group_mention_rate(none, terms).rows[0].rate == 0.0);

    // Hand count: women/alice 2 of 3, women/top-k 1 of 2, middle eastern/alice 2 of 3, plus an unknown group.
    std::vector<data::GenerationRecord> rs{
        rec("women deserve respect", M::alice, Label::benign, "women"),
        rec("that woman is loud", M::alice, Label::toxic, "women"),
        rec("they are loud", M::alice, Label::toxic, "women"),
        rec("WOMEN, again", M::top_k, Label::toxic, "women"),
        rec("arab food is great", M::top_k, Label::benign, "women"),
        rec("Middle Eastern cuisine", M::alice, Label::benign, "middle eastern"),
        rec("middle of eastern town", M::alice, Label::benign, "middle eastern"),
        rec("an arab poet", M::alice, Label::benign, "middle eastern"),
        rec("x", M::alice, Label::benign, "martians"),
        rec("y", M::alice, Label::benign, "martians"),
    };
    auto r = group_mention_rate(rs, terms);
    REQUIRE(r.rows.size() == 3);
    CHECK(r.rows[0].group == "middle eastern");
    CHECK(r.rows[0].rate == doctest::Approx(2.0 / 3));
    CHECK(r.rows[1].rate == doctest::Approx(2.0 / 3));
    CHECK(r.rows[2].rate == doctest::Approx(1.0 / 2));
    CHECK(r.warnings.size() == 1);
    CHECK(to_json(r)["measure"].get<std::string>().find("proxy") != std::string::npos);
    CHECK_THROWS_AS(group_mention_rate(rs, {{"women", {}}}), Error);
}
