#include "advgen/clf/classifier.hpp"

#include <cmath>

#include "advgen/core/error.hpp"

namespace advgen::clf {

namespace {

constexpr const char* kFormat = "advgen.linear_classifier";

double log_sigmoid(double z) {
    return z >= 0.0 ? -std::log1p(std::exp(-z)) : z - std::log1p(std::exp(z));
}

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

}  // namespace

double ToxicityClassifier::class_logprob(std::string_view text, Label cls) const {
    const double p = toxicity_prob(text);
    return cls == Label::toxic ? std::log(p) : std::log1p(-p);
}

LinearClassifier::LinearClassifier(FeatureSpace space) : space_(space) {
    space_.validate();
    weights_.assign(space_.dimension, 0.0);
}

double LinearClassifier::logit(std::string_view text) const {
    return dot(featurize(text, space_), weights_) + bias_;
}

double LinearClassifier::toxicity_prob(std::string_view text) const { return sigmoid(logit(text)); }

double LinearClassifier::class_logprob(std::string_view text, Label cls) const {
    const double z = logit(text);
    return cls == Label::toxic ? log_sigmoid(z) : log_sigmoid(-z);
}

LinearClassifier with_parameters(FeatureSpace space, std::vector<double> weights, double bias) {
    LinearClassifier clf(space);
    require(weights.size() == space.dimension, "weight vector length must equal the dimension");
    clf.weights_ = std::move(weights);
    clf.bias_ = bias;
    return clf;
}

LinearClassifier train_classifier(std::span<const LabeledText> data, const TrainMeta& meta,
                                  const LinearClassifier* warm_start, const FeatureSpace& space) {
    require(meta.epochs >= 0, "epochs must be >= 0");
    require(meta.learning_rate > 0.0, "learning rate must be positive");
    require(meta.l2 >= 0.0, "l2 must be >= 0");
    bool has_toxic = false;
    bool has_benign = false;
    double total_weight = 0.0;
    for (const auto& ex : data) {
        require(!ex.text.empty(), "training texts must be non-empty");
        require(ex.weight > 0.0, "example weights must be positive");
        (ex.label == Label::toxic ? has_toxic : has_benign) = true;
        total_weight += ex.weight;
    }
    require(has_toxic && has_benign, "training data must contain both labels");

    LinearClassifier clf = warm_start ? *warm_start : LinearClassifier(space);
    clf.meta_ = meta;

    std::vector<SparseVector> features;
    features.reserve(data.size());
    for (const auto& ex : data) features.push_back(featurize(ex.text, clf.space_));

    std::vector<double> grad(clf.weights_.size());
    for (int epoch = 0; epoch < meta.epochs; ++epoch) {
        std::fill(grad.begin(), grad.end(), 0.0);
        double grad_bias = 0.0;
        for (std::size_t i = 0; i < data.size(); ++i) {
            const double z = dot(features[i], clf.weights_) + clf.bias_;
            const double r = data[i].weight * (sigmoid(z) - label_value(data[i].label)) / total_weight;
            for (const auto& [idx, v] : features[i]) grad[idx] += r * v;
            grad_bias += r;
        }
        for (std::size_t j = 0; j < clf.weights_.size(); ++j) {
            clf.weights_[j] -= meta.learning_rate * (grad[j] + meta.l2 * clf.weights_[j]);
        }
        clf.bias_ -= meta.learning_rate * grad_bias;
    }
    return clf;
}

double training_loss(const LinearClassifier& clf, std::span<const LabeledText> data, double l2) {
    double loss = 0.0;
    double total_weight = 0.0;
    for (const auto& ex : data) {
        loss -= ex.weight * clf.class_logprob(ex.text, ex.label);
        total_weight += ex.weight;
    }
    double norm = 0.0;
    for (double w : clf.weights()) norm += w * w;
    return (total_weight > 0.0 ? loss / total_weight : 0.0) + 0.5 * l2 * norm;
}

json LinearClassifier::to_json() const {
    json weights = json::array();
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        if (weights_[i] != 0.0) weights.push_back({i, weights_[i]});
    }
    return {{"format", kFormat},
            {"version", kFormatVersion},
            {"space", {{"n_min", space_.n_min}, {"n_max", space_.n_max}, {"dimension", space_.dimension}}},
            {"bias", bias_},
            {"weights", std::move(weights)},
            {"train_meta",
             {{"epochs", meta_.epochs},
              {"learning_rate", meta_.learning_rate},
              {"l2", meta_.l2},
              {"seed", meta_.seed}}}};
}

LinearClassifier LinearClassifier::from_json(const json& j) {
    try {
        if (j.at("format") != kFormat) fail(ErrorCode::validation, "not a linear classifier file");
        if (j.at("version").get<int>() != kFormatVersion) {
            fail(ErrorCode::validation, "unsupported classifier version");
        }
        const auto& s = j.at("space");
        FeatureSpace space{s.at("n_min").get<int>(), s.at("n_max").get<int>(),
                           s.at("dimension").get<std::uint32_t>()};
        LinearClassifier clf(space);
        clf.bias_ = j.at("bias").get<double>();
        for (const auto& pair : j.at("weights")) {
            const auto idx = pair.at(0).get<std::size_t>();
            require(idx < clf.weights_.size(), "weight index out of range");
            clf.weights_[idx] = pair.at(1).get<double>();
        }
        if (j.contains("train_meta")) {
            const auto& m = j.at("train_meta");
            clf.meta_ = {m.at("epochs").get<int>(), m.at("learning_rate").get<double>(), m.at("l2").get<double>(),
                         m.at("seed").get<std::uint64_t>()};
        }
        return clf;
    } catch (const json::exception& e) {
        fail(ErrorCode::validation, std::string("malformed classifier: ") + e.what());
    }
}

void LinearClassifier::save(const std::filesystem::path& path) const { write_text(path, to_json().dump() + "\n"); }

LinearClassifier LinearClassifier::load(const std::filesystem::path& path) { return from_json(read_json(path)); }

LabeledText labeled_from_json(const json& row) {
    try {
        LabeledText ex;
        ex.text = row.at("text").get<std::string>();
        const auto& label = row.at("label");
        ex.label = label.is_number_integer() ? label_from_int(label.get<int>())
                                             : parse_label(label.get<std::string>());
        if (row.contains("weight")) ex.weight = row.at("weight").get<double>();
        require(!ex.text.empty(), "labeled text must be non-empty");
        return ex;
    } catch (const json::exception& e) {
        fail(ErrorCode::validation, std::string("bad labeled row: ") + e.what());
    }
}

std::vector<LabeledText> read_labeled_jsonl(const std::filesystem::path& path) {
    std::vector<LabeledText> out;
    for (const auto& row : read_jsonl(path)) out.push_back(labeled_from_json(row));
    return out;
}

}  // namespace advgen::clf
