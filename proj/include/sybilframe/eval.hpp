#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include "sybilframe/graph.hpp"
#include "sybilframe/inference.hpp"

namespace sybilframe {

// Detection quality of one run. Sybil is the positive class: FP = rejected
// benign nodes, FN = accepted Sybil nodes.
struct EvaluationReport {
    std::size_t tp = 0;
    std::size_t tn = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    double accuracy = 0.0;
    double fpr = 0.0;  // fp / (fp + tn)
    double fnr = 0.0;  // fn / (fn + tp)
    double auc = 0.0;
    std::map<std::size_t, double> topk_portions;  // k -> Sybil fraction in first k ranked

    std::size_t total() const { return tp + tn + fp + fn; }
};

// Confusion counts and ratios (the AUC and top-k fields are left at zero).
// Excluded nodes are skipped entirely; an Unknown truth label outside the
// exclude set is an error, as is an Unknown prediction.
EvaluationReport confusion(const LabelMap& predicted, const LabelMap& truth,
                           const std::unordered_set<NodeId>& exclude = {});

// Probability that a uniformly random benign node's belief exceeds a
// uniformly random Sybil node's, ties credited 0.5. Exact rank-sum
// computation; throws InputError when either class is empty after exclusion.
double auc(const BeliefVector& beliefs, const LabelMap& truth,
           const std::unordered_set<NodeId>& exclude = {});

// Fraction of Sybil-truth nodes among the first k ranked, for each k.
// Unknown-truth nodes count toward k but not as Sybil. Throws ConfigError on
// k = 0 or k > ranking size.
std::map<std::size_t, double> topk_sybil_portion(const std::vector<NodeId>& ranking,
                                                 const LabelMap& truth,
                                                 const std::vector<std::size_t>& ks);

// Convenience: confusion + AUC (+ top-k when ks given) in one report.
EvaluationReport evaluate(const BeliefVector& beliefs, const LabelMap& truth,
                          const std::unordered_set<NodeId>& exclude = {},
                          const std::vector<std::size_t>& ks = {});

struct MetricSummary {
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation, 0 for a single run
};

struct AggregateReport {
    MetricSummary accuracy, fpr, fnr, auc, fp, fn;
    std::map<std::size_t, MetricSummary> topk_portions;
    std::size_t runs = 0;
};

// Per-metric mean and sample standard deviation. Throws ConfigError on an
// empty list.
AggregateReport aggregate_runs(const std::vector<EvaluationReport>& reports);

MetricSummary summarize(const std::vector<double>& values);

}  // namespace sybilframe
