#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "advgen/clf/features.hpp"
#include "advgen/core/io.hpp"
#include "advgen/core/label.hpp"

namespace advgen::clf {

/// Binary toxicity scorer. Must accept any string, including partial words.
class ToxicityClassifier {
public:
    virtual ~ToxicityClassifier() = default;

    virtual double toxicity_prob(std::string_view text) const = 0;

    /// log p(cls | text); the two classes exponentiate to one.
    virtual double class_logprob(std::string_view text, Label cls) const;
};

struct LabeledText {
    std::string text;
    Label label = Label::benign;
    double weight = 1.0;
};

struct TrainMeta {
    int epochs = 200;
    double learning_rate = 0.1;
    double l2 = 1e-4;
    std::uint64_t seed = 0;
};

/// Logistic regression over hashed character n-grams.
class LinearClassifier final : public ToxicityClassifier {
public:
    static constexpr int kFormatVersion = 1;

    /// All-zero classifier (p = 0.5 everywhere).
    explicit LinearClassifier(FeatureSpace space = {});

    double logit(std::string_view text) const;
    double toxicity_prob(std::string_view text) const override;
    double class_logprob(std::string_view text, Label cls) const override;

    const FeatureSpace& space() const noexcept { return space_; }
    std::span<const double> weights() const noexcept { return weights_; }
    double bias() const noexcept { return bias_; }
    const TrainMeta& train_meta() const noexcept { return meta_; }

    json to_json() const;
    static LinearClassifier from_json(const json& j);
    void save(const std::filesystem::path& path) const;
    static LinearClassifier load(const std::filesystem::path& path);

    friend bool operator==(const LinearClassifier& a, const LinearClassifier& b) {
        return a.space_ == b.space_ && a.bias_ == b.bias_ && a.weights_ == b.weights_;
    }

private:
    friend LinearClassifier train_classifier(std::span<const LabeledText>, const TrainMeta&,
                                             const LinearClassifier*, const FeatureSpace&);
    friend LinearClassifier with_parameters(FeatureSpace, std::vector<double>, double);

    FeatureSpace space_;
    std::vector<double> weights_;
    double bias_ = 0.0;
    TrainMeta meta_;
};

/// Classifier with explicit parameters; `weights` must have `space.dimension` entries.
LinearClassifier with_parameters(FeatureSpace space, std::vector<double> weights, double bias);

/// Full-batch gradient descent on weighted logistic loss with L2 on the
/// weights (not the bias). Starts from `warm_start` when given, in which case
/// its feature space is used. Both labels must be present.
LinearClassifier train_classifier(std::span<const LabeledText> data, const TrainMeta& meta,
                                  const LinearClassifier* warm_start = nullptr,
                                  const FeatureSpace& space = {});

/// Weighted mean logistic loss plus (l2/2)*|w|^2.
double training_loss(const LinearClassifier& clf, std::span<const LabeledText> data, double l2);

/// JSONL rows {"text", "label"} with an optional "weight"; label is 0/1 or a name.
std::vector<LabeledText> read_labeled_jsonl(const std::filesystem::path& path);
LabeledText labeled_from_json(const json& row);

}  // namespace advgen::clf
