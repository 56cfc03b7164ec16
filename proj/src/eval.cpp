#include "sybilframe/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sybilframe/errors.hpp"

namespace sybilframe {

EvaluationReport confusion(const LabelMap& predicted, const LabelMap& truth,
                           const std::unordered_set<NodeId>& exclude) {
    if (predicted.size() != truth.size())
        throw InputError("prediction and truth cover different node sets");
    EvaluationReport report;
    for (NodeId v = 0; v < truth.size(); ++v) {
        if (exclude.count(v)) continue;
        if (truth[v] == Label::Unknown)
            throw InputError("Unknown truth label outside the exclude set");
        if (predicted[v] == Label::Unknown) throw InputError("Unknown predicted label");
        const bool actual_sybil = truth[v] == Label::Sybil;
        const bool flagged = predicted[v] == Label::Sybil;
        if (actual_sybil && flagged)
            ++report.tp;
        else if (!actual_sybil && !flagged)
            ++report.tn;
        else if (!actual_sybil && flagged)
            ++report.fp;
        else
            ++report.fn;
    }
    const std::size_t total = report.total();
    report.accuracy =
        total == 0 ? 0.0 : static_cast<double>(report.tp + report.tn) / static_cast<double>(total);
    report.fpr = report.fp + report.tn == 0
                     ? 0.0
                     : static_cast<double>(report.fp) / static_cast<double>(report.fp + report.tn);
    report.fnr = report.fn + report.tp == 0
                     ? 0.0
                     : static_cast<double>(report.fn) / static_cast<double>(report.fn + report.tp);
    return report;
}

double auc(const BeliefVector& beliefs, const LabelMap& truth,
           const std::unordered_set<NodeId>& exclude) {
    if (beliefs.size() != truth.size())
        throw InputError("beliefs and truth cover different node sets");
    std::vector<NodeId> nodes;
    nodes.reserve(truth.size());
    std::size_t benign = 0, sybil = 0;
    for (NodeId v = 0; v < truth.size(); ++v) {
        if (exclude.count(v)) continue;
        if (truth[v] == Label::Unknown)
            throw InputError("Unknown truth label outside the exclude set");
        nodes.push_back(v);
        (truth[v] == Label::Benign ? benign : sybil)++;
    }
    if (benign == 0 || sybil == 0) throw InputError("AUC needs at least one node of each class");

    std::sort(nodes.begin(), nodes.end(), [&](NodeId a, NodeId b) {
        return beliefs.bel[a] < beliefs.bel[b];
    });

    // Rank-sum with average ranks over ties; every quantity below is an exact
    // half-integer, so the computation incurs no accumulation error.
    double benign_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < nodes.size()) {
        std::size_t j = i;
        while (j < nodes.size() && beliefs.bel[nodes[j]] == beliefs.bel[nodes[i]]) ++j;
        const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k)
            if (truth[nodes[k]] == Label::Benign) benign_rank_sum += avg_rank;
        i = j;
    }
    const double nb = static_cast<double>(benign);
    const double u = benign_rank_sum - nb * (nb + 1.0) / 2.0;
    return u / (nb * static_cast<double>(sybil));
}

std::map<std::size_t, double> topk_sybil_portion(const std::vector<NodeId>& ranking,
                                                 const LabelMap& truth,
                                                 const std::vector<std::size_t>& ks) {
    std::map<std::size_t, double> portions;
    for (std::size_t k : ks) {
        if (k == 0) throw ConfigError("top-k portion requires k >= 1");
        if (k > ranking.size()) throw ConfigError("k exceeds the ranking length");
        std::size_t sybils = 0;
        for (std::size_t i = 0; i < k; ++i)
            if (truth[ranking[i]] == Label::Sybil) ++sybils;
        portions[k] = static_cast<double>(sybils) / static_cast<double>(k);
    }
    return portions;
}

EvaluationReport evaluate(const BeliefVector& beliefs, const LabelMap& truth,
                          const std::unordered_set<NodeId>& exclude,
                          const std::vector<std::size_t>& ks) {
    EvaluationReport report = confusion(classify(beliefs), truth, exclude);
    report.auc = auc(beliefs, truth, exclude);
    if (!ks.empty()) report.topk_portions = topk_sybil_portion(rank(beliefs), truth, ks);
    return report;
}

MetricSummary summarize(const std::vector<double>& values) {
    MetricSummary s;
    if (values.empty()) return s;
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return s;
}

AggregateReport aggregate_runs(const std::vector<EvaluationReport>& reports) {
    if (reports.empty()) throw ConfigError("cannot aggregate an empty report list");
    AggregateReport agg;
    agg.runs = reports.size();
    auto collect = [&](auto getter) {
        std::vector<double> values;
        values.reserve(reports.size());
        for (const auto& r : reports) values.push_back(getter(r));
        return summarize(values);
    };
    agg.accuracy = collect([](const EvaluationReport& r) { return r.accuracy; });
    agg.fpr = collect([](const EvaluationReport& r) { return r.fpr; });
    agg.fnr = collect([](const EvaluationReport& r) { return r.fnr; });
    agg.auc = collect([](const EvaluationReport& r) { return r.auc; });
    agg.fp = collect([](const EvaluationReport& r) { return static_cast<double>(r.fp); });
    agg.fn = collect([](const EvaluationReport& r) { return static_cast<double>(r.fn); });
    for (const auto& [k, unused] : reports.front().topk_portions) {
        std::vector<double> values;
        for (const auto& r : reports) {
            auto it = r.topk_portions.find(k);
            if (it == r.topk_portions.end())
                throw ConfigError("reports do not share the same top-k set");
            values.push_back(it->second);
        }
        agg.topk_portions[k] = summarize(values);
    }
    return agg;
}

}  // namespace sybilframe
