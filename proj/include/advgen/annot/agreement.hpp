#pragma once

#include <span>
#include <string>
#include <vector>

#include "advgen/annot/record.hpp"
#include "advgen/core/io.hpp"

namespace advgen::annot {

/// Items x categories count table; every row sums to `raters`.
struct AnnotationMatrix {
    std::vector<std::vector<std::size_t>> counts;
    std::size_t raters = 0;

    /// Rows of category indices in [0, categories), one row per item.
    static AnnotationMatrix from_labels(const std::vector<std::vector<std::size_t>>& labels, std::size_t categories);
    void validate() const;
};

struct Agreement {
    double value = 0.0;
    bool degenerate = false;  // no chance disagreement possible; value set to 1
};

Agreement fleiss_kappa(const AnnotationMatrix& m);

enum class Metric { nominal, interval };

/// One unit per item; each holds the values it received (missing ones are
/// simply absent). Units with fewer than two values are ignored.
Agreement krippendorff_alpha(const std::vector<std::vector<double>>& units, Metric metric);

struct AgreementSummary {
    double all_agree_pct = 0.0;
    double majority_pct = 0.0;
    std::size_t items = 0;
    std::size_t excluded = 0;
    std::vector<std::string> warnings;
};

/// Items with exactly three labels; others are excluded with a warning.
AgreementSummary agreement_summary(const std::vector<std::vector<ToxicityClass>>& items,
                                   const std::vector<std::string>& item_ids = {});

struct ItemLabel {
    std::string item_id;
    std::size_t annotations = 0;
    ToxicityClass toxicity = ToxicityClass::ambiguous;
    bool toxicity_tie = false;  // no strict majority; resolved to ambiguous
    Author author = Author::human;
    bool author_tie = false;    // even split; resolved to human
    Intent intent = Intent::unsure;
    double mean_max_score = 0.0;
};

/// Strict-majority toxicity class, falling back to ambiguous on ties.
ToxicityClass majority_class(std::span<const ToxicityClass> labels, bool* tie = nullptr);

/// Per-item majority labels, ordered by first appearance of the item.
std::vector<ItemLabel> aggregate_labels(std::span<const AnnotationRecord> records);

struct LabelRates {
    std::size_t items = 0;
    double toxic_pct = 0.0;
    double ambiguous_pct = 0.0;
    double non_toxic_pct = 0.0;
    double human_majority_pct = 0.0;       // thought human-written by a majority
    double hate_among_toxic_pct = 0.0;     // majority intent "harm" among toxic items
    std::size_t toxicity_ties = 0;
};

LabelRates label_rates(std::span<const ItemLabel> items);

/// Grouped per item, in first-appearance order.
std::vector<std::vector<const AnnotationRecord*>> group_by_item(std::span<const AnnotationRecord> records);

/// κ over the three classes (items with the modal annotation count only),
/// α interval on the max score and α nominal on the classes, the summary and
/// the aggregate rates.
json agreement_report(std::span<const AnnotationRecord> records);

}  // namespace advgen::annot
