#include <cmath>

#include "doctest.h"
#include "sybilframe/classifier.hpp"
#include "sybilframe/errors.hpp"
#include "sybilframe/priors.hpp"
#include "sybilframe/rng.hpp"

using namespace sybilframe;

namespace {

// Two 2-D Gaussian blobs; benign centered at +center, sybil at -center.
void make_blobs(Rng& rng, std::size_t per_class, double center, double spread, FeatureMatrix& x,
                std::vector<Label>& y) {
    x = FeatureMatrix::zeros(2 * per_class, 2);
    y.assign(2 * per_class, Label::Benign);
    auto gauss = [&] {
        // Box-Muller
        const double u1 = std::max(rng.uniform01(), 1e-12);
        const double u2 = rng.uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    };
    for (std::size_t i = 0; i < 2 * per_class; ++i) {
        const bool benign = i < per_class;
        const double sign = benign ? 1.0 : -1.0;
        x.at(i, 0) = sign * center + spread * gauss();
        x.at(i, 1) = sign * center + spread * gauss();
        y[i] = benign ? Label::Benign : Label::Sybil;
    }
}

}  // namespace

TEST_CASE("separable data trains to perfect accuracy") {
    FeatureMatrix x = FeatureMatrix::zeros(8, 2);
    std::vector<Label> y(8);
    for (std::size_t i = 0; i < 8; ++i) {
        const bool benign = i < 4;
        x.at(i, 0) = benign ? 2.0 + double(i) : -2.0 - double(i);
        x.at(i, 1) = benign ? 1.0 : -1.0;
        y[i] = benign ? Label::Benign : Label::Sybil;
    }
    auto clf = train_classifier(x, y);
    for (std::size_t i = 0; i < 8; ++i) {
        const bool predicted_benign = clf.predict_proba(x.row(i)) > 0.5;
        CHECK(predicted_benign == (y[i] == Label::Benign));
    }
}

TEST_CASE("symmetric data puts probability 0.5 at the midpoint") {
    Rng rng(2);
    FeatureMatrix x;
    std::vector<Label> y;
    make_blobs(rng, 400, 1.0, 0.7, x, y);
    // Mirror-symmetrize exactly so the optimum passes through the origin.
    for (std::size_t i = 0; i < 400; ++i)
        for (std::size_t j = 0; j < 2; ++j) x.at(400 + i, j) = -x.at(i, j);
    auto clf = train_classifier(x, y, {1.0, 1.0});
    const double midpoint[2] = {0.0, 0.0};
    CHECK(clf.predict_proba(midpoint) == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("raising the benign weight strictly reduces false positives") {
    Rng rng(5);
    FeatureMatrix train, validation;
    std::vector<Label> train_y, validation_y;
    make_blobs(rng, 600, 0.6, 1.0, train, train_y);
    make_blobs(rng, 600, 0.6, 1.0, validation, validation_y);

    std::vector<std::size_t> fp_counts;
    for (double w : {1.0, 4.0, 16.0}) {
        auto clf = train_classifier(train, train_y, {w, 1.0});
        std::size_t fp = 0;
        for (std::size_t i = 0; i < validation.rows; ++i) {
            const bool flagged = clf.predict_proba(validation.row(i)) < 0.5;
            if (flagged && validation_y[i] == Label::Benign) ++fp;
        }
        fp_counts.push_back(fp);
    }
    CHECK(fp_counts[0] > fp_counts[1]);
    CHECK(fp_counts[1] > fp_counts[2]);
}

TEST_CASE("probabilities are calibrated on logistic ground truth") {
    Rng rng(9);
    const std::size_t n = 10000;
    FeatureMatrix x = FeatureMatrix::zeros(n, 2);
    std::vector<Label> y(n);
    const double beta[2] = {1.5, -0.8};
    for (std::size_t i = 0; i < n; ++i) {
        x.at(i, 0) = rng.uniform(-2.0, 2.0);
        x.at(i, 1) = rng.uniform(-2.0, 2.0);
        const double z = beta[0] * x.at(i, 0) + beta[1] * x.at(i, 1);
        y[i] = rng.bernoulli(1.0 / (1.0 + std::exp(-z))) ? Label::Benign : Label::Sybil;
    }
    auto clf = train_classifier(x, y);

    // Decile reliability diagram: mean absolute gap between predicted and
    // empirical benign rates.
    double bin_pred[10] = {}, bin_true[10] = {};
    std::size_t bin_count[10] = {};
    for (std::size_t i = 0; i < n; ++i) {
        const double p = clf.predict_proba(x.row(i));
        auto b = std::min<std::size_t>(9, static_cast<std::size_t>(p * 10.0));
        bin_pred[b] += p;
        bin_true[b] += y[i] == Label::Benign ? 1.0 : 0.0;
        ++bin_count[b];
    }
    double mace = 0.0;
    int bins = 0;
    for (int b = 0; b < 10; ++b) {
        if (bin_count[b] < 50) continue;
        mace += std::abs(bin_pred[b] - bin_true[b]) / double(bin_count[b]);
        ++bins;
    }
    mace /= bins;
    CHECK(mace < 0.05);
}

TEST_CASE("probability is monotone in the decision value") {
    Rng rng(12);
    FeatureMatrix x;
    std::vector<Label> y;
    make_blobs(rng, 100, 1.0, 1.0, x, y);
    auto clf = train_classifier(x, y);
    double scores[5], probs[5];
    for (int i = 0; i < 5; ++i) {
        const double point[2] = {rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)};
        scores[i] = clf.decision_value(point);
        probs[i] = clf.predict_proba(point);
    }
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            if (scores[i] < scores[j]) CHECK(probs[i] <= probs[j]);
}

TEST_CASE("degenerate training inputs are rejected") {
    FeatureMatrix x = FeatureMatrix::zeros(4, 2);
    CHECK_THROWS_AS(train_classifier(x, std::vector<Label>(4, Label::Benign)), ConfigError);
    std::vector<Label> with_unknown = {Label::Benign, Label::Benign, Label::Sybil, Label::Unknown};
    CHECK_THROWS_AS(train_classifier(x, with_unknown), ConfigError);
    std::vector<Label> ok = {Label::Benign, Label::Benign, Label::Sybil, Label::Sybil};
    FeatureMatrix inf_x = x;
    inf_x.at(0, 0) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(train_classifier(inf_x, ok), ConfigError);
}

TEST_CASE("classifier outputs become clamped node priors") {
    Rng rng(21);
    FeatureMatrix x;
    std::vector<Label> y;
    make_blobs(rng, 50, 4.0, 0.2, x, y);  // near-separable -> saturated probabilities
    auto clf = train_classifier(x, y, {}, {.l2 = 1e-9});
    auto priors = classify_to_node_priors(clf, x, {5, 60});
    CHECK(priors[5] == 0.5);  // unknown stays exactly 0.5
    CHECK(priors[60] == 0.5);
    for (std::size_t v = 0; v < x.rows; ++v) {
        CHECK(priors[v] >= kPriorClamp);
        CHECK(priors[v] <= 1.0 - kPriorClamp);
    }
    CHECK(priors[0] == 1.0 - kPriorClamp);  // deep inside the benign blob
}
