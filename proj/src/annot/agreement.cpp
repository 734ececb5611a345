#include "advgen/annot/agreement.hpp"

#include <algorithm>
#include <array>
#include <map>

#include "advgen/core/error.hpp"

namespace advgen::annot {

AnnotationMatrix AnnotationMatrix::from_labels(const std::vector<std::vector<std::size_t>>& labels,
                                               std::size_t categories) {
    AnnotationMatrix m;
    for (const auto& row : labels) {
        std::vector<std::size_t> counts(categories, 0);
        for (auto c : row) {
            require(c < categories, "category index out of range");
            ++counts[c];
        }
        m.counts.push_back(std::move(counts));
    }
    m.raters = labels.empty() ? 0 : labels.front().size();
    m.validate();
    return m;
}

void AnnotationMatrix::validate() const {
    for (const auto& row : counts) {
        std::size_t s = 0;
        for (auto c : row) s += c;
        require(s == raters, "every item needs the same number of raters");
    }
}

Agreement fleiss_kappa(const AnnotationMatrix& m) {
    m.validate();
    require(m.counts.size() >= 2, "Fleiss' kappa needs at least two items");
    require(m.raters >= 2, "Fleiss' kappa needs at least two raters per item");
    const std::size_t k = m.counts.front().size();
    const double r = static_cast<double>(m.raters);
    const double n = static_cast<double>(m.counts.size());

    std::vector<double> p(k, 0.0);
    double p_bar = 0.0;
    for (const auto& row : m.counts) {
        require(row.size() == k, "ragged annotation matrix");
        double sq = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            const double c = static_cast<double>(row[j]);
            sq += c * c;
            p[j] += c;
        }
        p_bar += (sq - r) / (r * (r - 1.0));
    }
    p_bar /= n;
    double p_e = 0.0;
    for (auto& pj : p) {
        pj /= n * r;
        p_e += pj * pj;
    }
    if (p_e >= 1.0) return {1.0, true};
    return {(p_bar - p_e) / (1.0 - p_e), false};
}

Agreement krippendorff_alpha(const std::vector<std::vector<double>>& units, Metric metric) {
    // Coincidence matrix over the distinct values.
    std::vector<double> values;
    for (const auto& u : units) {
        if (u.size() >= 2) values.insert(values.end(), u.begin(), u.end());
    }
    require(!values.empty(), "Krippendorff's alpha needs an item with at least two annotations");
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    const std::size_t v = values.size();
    auto index = [&](double x) {
        return static_cast<std::size_t>(std::lower_bound(values.begin(), values.end(), x) - values.begin());
    };

    std::vector<double> o(v * v, 0.0);
    for (const auto& u : units) {
        const std::size_t m = u.size();
        if (m < 2) continue;
        std::vector<std::size_t> count(v, 0);
        for (double x : u) ++count[index(x)];
        const double w = 1.0 / static_cast<double>(m - 1);
        for (std::size_t c = 0; c < v; ++c) {
            if (count[c] == 0) continue;
            for (std::size_t k = 0; k < v; ++k) {
                const double pairs = c == k ? static_cast<double>(count[c] * (count[c] - 1))
                                            : static_cast<double>(count[c] * count[k]);
                o[c * v + k] += pairs * w;
            }
        }
    }

    auto delta = [&](std::size_t c, std::size_t k) {
        if (metric == Metric::nominal) return c == k ? 0.0 : 1.0;
        const double d = values[c] - values[k];
        return d * d;
    };
    std::vector<double> nc(v, 0.0);
    double n = 0.0;
    for (std::size_t c = 0; c < v; ++c) {
        for (std::size_t k = 0; k < v; ++k) nc[c] += o[c * v + k];
        n += nc[c];
    }
    double d_o = 0.0, d_e = 0.0;
    for (std::size_t c = 0; c < v; ++c) {
        for (std::size_t k = 0; k < v; ++k) {
            const double d = delta(c, k);
            d_o += o[c * v + k] * d;
            d_e += nc[c] * nc[k] * d;
        }
    }
    d_o /= n;
    d_e /= n * (n - 1.0);
    if (d_e <= 0.0) return {1.0, true};
    return {1.0 - d_o / d_e, false};
}

AgreementSummary agreement_summary(const std::vector<std::vector<ToxicityClass>>& items,
                                   const std::vector<std::string>& item_ids) {
    AgreementSummary s;
    std::size_t all = 0, majority = 0;
    for (std::size_t i = 0; i < items.size(); ++i) {
        const auto& labels = items[i];
        if (labels.size() != 3) {
            ++s.excluded;
            const auto id = i < item_ids.size() ? item_ids[i] : std::to_string(i);
            s.warnings.push_back("item " + id + " has " + std::to_string(labels.size()) +
                                 " labels; excluded from the summary");
            continue;
        }
        ++s.items;
        const bool ab = labels[0] == labels[1], bc = labels[1] == labels[2], ac = labels[0] == labels[2];
        all += ab && bc;
        majority += ab || bc || ac;
    }
    if (s.items > 0) {
        s.all_agree_pct = 100.0 * static_cast<double>(all) / static_cast<double>(s.items);
        s.majority_pct = 100.0 * static_cast<double>(majority) / static_cast<double>(s.items);
    }
    return s;
}

ToxicityClass majority_class(std::span<const ToxicityClass> labels, bool* tie) {
    std::array<std::size_t, 3> count{};
    for (auto c : labels) ++count[static_cast<std::size_t>(c)];
    for (std::size_t c = 0; c < 3; ++c) {
        if (2 * count[c] > labels.size()) {
            if (tie) *tie = false;
            return static_cast<ToxicityClass>(c);
        }
    }
    if (tie) *tie = true;
    return ToxicityClass::ambiguous;
}

std::vector<std::vector<const AnnotationRecord*>> group_by_item(std::span<const AnnotationRecord> records) {
    std::map<std::string, std::size_t> slot;
    std::vector<std::vector<const AnnotationRecord*>> out;
    for (const auto& r : records) {
        auto [it, inserted] = slot.emplace(r.item_id, out.size());
        if (inserted) out.emplace_back();
        out[it->second].push_back(&r);
    }
    return out;
}

std::vector<ItemLabel> aggregate_labels(std::span<const AnnotationRecord> records) {
    std::vector<ItemLabel> out;
    for (const auto& group : group_by_item(records)) {
        ItemLabel item;
        item.item_id = group.front()->item_id;
        item.annotations = group.size();
        std::vector<ToxicityClass> classes;
        std::size_t human = 0;
        std::array<std::size_t, 3> intent{};
        double score = 0.0;
        for (const auto* r : group) {
            classes.push_back(toxicity_class(*r));
            human += r->human_or_ai == Author::human;
            ++intent[static_cast<std::size_t>(r->harmful_intent)];
            score += max_score(*r);
        }
        item.toxicity = majority_class(classes, &item.toxicity_tie);
        const std::size_t ai = group.size() - human;
        item.author = ai > human ? Author::ai : Author::human;
        item.author_tie = ai == human;
        item.intent = Intent::unsure;
        for (std::size_t c = 0; c < 3; ++c) {
            if (2 * intent[c] > group.size()) item.intent = static_cast<Intent>(c);
        }
        item.mean_max_score = score / static_cast<double>(group.size());
        out.push_back(std::move(item));
    }
    return out;
}

LabelRates label_rates(std::span<const ItemLabel> items) {
    LabelRates r;
    r.items = items.size();
    if (items.empty()) return r;
    std::size_t toxic = 0, ambiguous = 0, human = 0, hate = 0;
    for (const auto& i : items) {
        toxic += i.toxicity == ToxicityClass::toxic;
        ambiguous += i.toxicity == ToxicityClass::ambiguous;
        human += i.author == Author::human && !i.author_tie;
        hate += i.toxicity == ToxicityClass::toxic && i.intent == Intent::harm;
        r.toxicity_ties += i.toxicity_tie;
    }
    const double n = static_cast<double>(items.size());
    r.toxic_pct = 100.0 * static_cast<double>(toxic) / n;
    r.ambiguous_pct = 100.0 * static_cast<double>(ambiguous) / n;
    r.non_toxic_pct = 100.0 - r.toxic_pct - r.ambiguous_pct;
    r.human_majority_pct = 100.0 * static_cast<double>(human) / n;
    r.hate_among_toxic_pct = toxic == 0 ? 0.0 : 100.0 * static_cast<double>(hate) / static_cast<double>(toxic);
    return r;
}

json agreement_report(std::span<const AnnotationRecord> records) {
    require(!records.empty(), "no annotations");
    const auto groups = group_by_item(records);

    std::map<std::size_t, std::size_t> sizes;
    for (const auto& g : groups) ++sizes[g.size()];
    std::size_t modal = 0, best = 0;
    for (auto [size, n] : sizes) {
        if (n > best) modal = size, best = n;
    }

    std::vector<std::vector<std::size_t>> kappa_rows;
    std::vector<std::vector<double>> score_units, class_units;
    std::vector<std::vector<ToxicityClass>> class_lists;
    std::vector<std::string> ids;
    for (const auto& g : groups) {
        std::vector<std::size_t> row;
        std::vector<double> scores, classes;
        std::vector<ToxicityClass> cl;
        for (const auto* r : g) {
            const auto c = toxicity_class(*r);
            row.push_back(static_cast<std::size_t>(c));
            scores.push_back(max_score(*r));
            classes.push_back(static_cast<double>(c));
            cl.push_back(c);
        }
        if (g.size() == modal) kappa_rows.push_back(std::move(row));
        score_units.push_back(std::move(scores));
        class_units.push_back(std::move(classes));
        class_lists.push_back(std::move(cl));
        ids.push_back(g.front()->item_id);
    }

    json report;
    report["items"] = groups.size();
    report["annotations"] = records.size();
    if (kappa_rows.size() >= 2 && modal >= 2) {
        const auto k = fleiss_kappa(AnnotationMatrix::from_labels(kappa_rows, 3));
        report["fleiss_kappa"] = {{"value", k.value}, {"degenerate", k.degenerate}, {"items", kappa_rows.size()},
                                  {"raters", modal}};
    } else {
        report["fleiss_kappa"] = nullptr;
    }
    const auto ai = krippendorff_alpha(score_units, Metric::interval);
    const auto an = krippendorff_alpha(class_units, Metric::nominal);
    report["krippendorff_alpha_interval"] = {{"value", ai.value}, {"degenerate", ai.degenerate}};
    report["krippendorff_alpha_nominal"] = {{"value", an.value}, {"degenerate", an.degenerate}};

    const auto s = agreement_summary(class_lists, ids);
    report["summary"] = {{"all_agree_pct", s.all_agree_pct},
                         {"majority_pct", s.majority_pct},
                         {"items", s.items},
                         {"excluded", s.excluded},
                         {"warnings", s.warnings}};
    const auto items = aggregate_labels(records);
    const auto rates = label_rates(items);
    report["rates"] = {{"toxic_pct", rates.toxic_pct},
                       {"ambiguous_pct", rates.ambiguous_pct},
                       {"non_toxic_pct", rates.non_toxic_pct},
                       {"human_majority_pct", rates.human_majority_pct},
                       {"hate_among_toxic_pct", rates.hate_among_toxic_pct},
                       {"toxicity_ties", rates.toxicity_ties}};
    return report;
}

}  // namespace advgen::annot
