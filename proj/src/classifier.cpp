#include "sybilframe/classifier.hpp"

#include <algorithm>
#include <cmath>

#include "sybilframe/errors.hpp"
#include "sybilframe/priors.hpp"

namespace sybilframe {

namespace {

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// Solves the SPD system a * x = b in place via Cholesky; dimension is tiny
// (feature count + 1).
std::vector<double> solve_spd(std::vector<double> a, std::vector<double> b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = a[i * n + j];
            for (std::size_t k = 0; k < j; ++k) sum -= a[i * n + k] * a[j * n + k];
            if (i == j) {
                if (sum <= 0.0) throw ConfigError("normal equations are not positive definite");
                a[i * n + j] = std::sqrt(sum);
            } else {
                a[i * n + j] = sum / a[j * n + j];
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        double sum = b[i];
        for (std::size_t k = 0; k < i; ++k) sum -= a[i * n + k] * b[k];
        b[i] = sum / a[i * n + i];
    }
    for (std::size_t i = n; i > 0; --i) {
        double sum = b[i - 1];
        for (std::size_t k = i; k < n; ++k) sum -= a[k * n + (i - 1)] * b[k];
        b[i - 1] = sum / a[(i - 1) * n + (i - 1)];
    }
    return b;
}

}  // namespace

double LogisticRegression::decision_value(std::span<const double> features) const {
    double z = bias_;
    for (std::size_t j = 0; j < weights_.size(); ++j)
        z += weights_[j] * (features[j] - feature_mean_[j]) * feature_scale_[j];
    return z;
}

double LogisticRegression::predict_proba(std::span<const double> features) const {
    return sigmoid(decision_value(features));
}

LogisticRegression train_classifier(const FeatureMatrix& features, const std::vector<Label>& labels,
                                    const ClassWeights& weights,
                                    const LogisticRegressionOptions& options) {
    const std::size_t n = features.rows;
    const std::size_t d = features.cols;
    if (labels.size() != n) throw ConfigError("label count does not match feature rows");
    if (weights.benign <= 0.0 || weights.sybil <= 0.0)
        throw ConfigError("class weights must be positive");

    std::size_t benign = 0, sybil = 0;
    for (Label l : labels) {
        if (l == Label::Benign)
            ++benign;
        else if (l == Label::Sybil)
            ++sybil;
        else
            throw ConfigError("training labels must be benign or sybil");
    }
    if (benign < 2 || sybil < 2) throw ConfigError("need at least two examples of each class");
    for (double x : features.data)
        if (!std::isfinite(x)) throw ConfigError("features must be finite");

    LogisticRegression model;
    model.feature_mean_.assign(d, 0.0);
    model.feature_scale_.assign(d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) model.feature_mean_[j] += features.at(i, j);
    for (double& m : model.feature_mean_) m /= static_cast<double>(n);
    std::vector<double> var(d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            const double c = features.at(i, j) - model.feature_mean_[j];
            var[j] += c * c;
        }
    for (std::size_t j = 0; j < d; ++j) {
        const double sd = std::sqrt(var[j] / static_cast<double>(n));
        model.feature_scale_[j] = sd > 0.0 ? 1.0 / sd : 0.0;  // constant column contributes nothing
    }

    // Standardized design matrix with a trailing intercept column.
    const std::size_t p = d + 1;
    std::vector<double> design(n * p);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j)
            design[i * p + j] =
                (features.at(i, j) - model.feature_mean_[j]) * model.feature_scale_[j];
        design[i * p + d] = 1.0;
    }

    std::vector<double> y(n), w(n);
    double weight_total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = labels[i] == Label::Benign ? 1.0 : 0.0;
        w[i] = labels[i] == Label::Benign ? weights.benign : weights.sybil;
        weight_total += w[i];
    }

    std::vector<double> beta(p, 0.0);
    auto objective = [&](const std::vector<double>& b) {
        double loss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double z = 0.0;
            for (std::size_t j = 0; j < p; ++j) z += design[i * p + j] * b[j];
            // log(1 + e^-|z|) form avoids overflow for either label
            const double margin = y[i] > 0.5 ? z : -z;
            loss += w[i] * (margin >= 0.0 ? std::log1p(std::exp(-margin))
                                          : -margin + std::log1p(std::exp(margin)));
        }
        loss /= weight_total;
        for (std::size_t j = 0; j + 1 < p; ++j) loss += 0.5 * options.l2 * b[j] * b[j];
        return loss;
    };

    double current = objective(beta);
    for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
        std::vector<double> grad(p, 0.0);
        std::vector<double> hess(p * p, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double z = 0.0;
            for (std::size_t j = 0; j < p; ++j) z += design[i * p + j] * beta[j];
            const double mu = sigmoid(z);
            const double r = w[i] * (mu - y[i]) / weight_total;
            const double h = std::max(w[i] * mu * (1.0 - mu) / weight_total, 1e-12);
            for (std::size_t j = 0; j < p; ++j) {
                grad[j] += r * design[i * p + j];
                for (std::size_t k = 0; k <= j; ++k)
                    hess[j * p + k] += h * design[i * p + j] * design[i * p + k];
            }
        }
        for (std::size_t j = 0; j + 1 < p; ++j) {
            grad[j] += options.l2 * beta[j];
            hess[j * p + j] += options.l2;
        }
        hess[(p - 1) * p + (p - 1)] += 1e-10;
        for (std::size_t j = 0; j < p; ++j)
            for (std::size_t k = j + 1; k < p; ++k) hess[j * p + k] = hess[k * p + j];

        double grad_norm = 0.0;
        for (double gj : grad) grad_norm = std::max(grad_norm, std::abs(gj));
        if (grad_norm < options.gradient_tol) break;

        std::vector<double> step = solve_spd(hess, grad, p);
        double scale = 1.0;
        for (int halving = 0; halving < 40; ++halving) {
            std::vector<double> candidate(p);
            for (std::size_t j = 0; j < p; ++j) candidate[j] = beta[j] - scale * step[j];
            const double value = objective(candidate);
            if (value <= current + 1e-15) {
                beta = std::move(candidate);
                current = value;
                break;
            }
            scale *= 0.5;
        }
    }

    model.weights_.assign(beta.begin(), beta.begin() + d);
    model.bias_ = beta[d];
    return model;
}

std::vector<double> classify_to_node_priors(const Classifier& clf, const FeatureMatrix& features,
                                            const std::unordered_set<NodeId>& unknown_nodes) {
    std::vector<double> priors(features.rows, 0.5);
    for (std::size_t v = 0; v < features.rows; ++v) {
        if (unknown_nodes.count(static_cast<NodeId>(v))) continue;  // stays exactly 0.5
        priors[v] = clamp_prior(clf.predict_proba(features.row(v)));
    }
    return priors;
}

}  // namespace sybilframe
