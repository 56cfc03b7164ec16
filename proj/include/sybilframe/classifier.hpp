#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <unordered_set>
#include <vector>

#include "sybilframe/graph.hpp"

namespace sybilframe {

// Dense row-major feature matrix.
struct FeatureMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
    double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    static FeatureMatrix zeros(std::size_t rows, std::size_t cols) {
        return {rows, cols, std::vector<double>(rows * cols, 0.0)};
    }
};

// Loss weights per class; raising the benign weight penalizes rejected benign
// examples more and pushes the decision boundary toward fewer false positives.
struct ClassWeights {
    double benign = 1.0;
    double sybil = 1.0;
};

// Probabilistic binary classifier interface: feature vector -> P(benign).
class Classifier {
public:
    virtual ~Classifier() = default;
    virtual double predict_proba(std::span<const double> features) const = 0;
};

struct LogisticRegressionOptions {
    double l2 = 1e-4;              // ridge strength on the weights (not the bias)
    double gradient_tol = 1e-8;    // infinity norm of the mean-loss gradient
    std::size_t max_iterations = 200;
};

// L2-regularized logistic regression fitted by damped Newton iterations on
// standardized features. Deterministic and single-threaded.
class LogisticRegression : public Classifier {
public:
    double predict_proba(std::span<const double> features) const override;

    // Linear score before the sigmoid (standardized feature space).
    double decision_value(std::span<const double> features) const;

    const std::vector<double>& weights() const { return weights_; }
    double bias() const { return bias_; }

    friend LogisticRegression train_classifier(const FeatureMatrix&, const std::vector<Label>&,
                                               const ClassWeights&,
                                               const LogisticRegressionOptions&);

private:
    std::vector<double> weights_;  // per standardized feature
    double bias_ = 0.0;
    std::vector<double> feature_mean_;
    std::vector<double> feature_scale_;  // 1/stddev, 0 for constant columns
};

// Labels must contain at least two examples of each of Benign and Sybil
// (Unknown is rejected); features must be finite. Throws ConfigError.
LogisticRegression train_classifier(const FeatureMatrix& features, const std::vector<Label>& labels,
                                    const ClassWeights& weights = {},
                                    const LogisticRegressionOptions& options = {});

// P(benign) per node, clamped into [kPriorClamp, 1 - kPriorClamp]; nodes in
// unknown_nodes get exactly 0.5.
std::vector<double> classify_to_node_priors(const Classifier& clf, const FeatureMatrix& features,
                                            const std::unordered_set<NodeId>& unknown_nodes);

}  // namespace sybilframe
