#include "sybilframe/baselines.hpp"

#include <cmath>

#include "sybilframe/errors.hpp"

namespace sybilframe {

TrustVector sybilrank(const UndirectedGraph& g, const std::vector<NodeId>& benign_seeds,
                      int iterations) {
    if (benign_seeds.empty()) throw ConfigError("trust propagation needs at least one seed");
    const NodeId n = g.node_count();
    if (iterations < 0)
        iterations = static_cast<int>(std::ceil(std::log2(std::max<double>(2.0, n))));

    TrustVector result;
    result.trust.assign(n, 0.0);
    const double share = static_cast<double>(n) / static_cast<double>(benign_seeds.size());
    for (NodeId s : benign_seeds) result.trust[s] += share;

    std::vector<double> next(n, 0.0);
    std::vector<double> outflow(n, 0.0);
    for (int round = 0; round < iterations; ++round) {
        for (NodeId v = 0; v < n; ++v) {
            const std::size_t deg = g.degree(v);
            outflow[v] = deg > 0 ? result.trust[v] / static_cast<double>(deg) : 0.0;
        }
#pragma omp parallel for schedule(dynamic, 256)
        for (std::int64_t v = 0; v < static_cast<std::int64_t>(n); ++v) {
            double acc = 0.0;
            for (NodeId u : g.neighbors(static_cast<NodeId>(v))) acc += outflow[u];
            next[v] = acc;
        }
        std::swap(result.trust, next);
    }

    result.normalized.resize(n);
    for (NodeId v = 0; v < n; ++v) {
        const std::size_t deg = g.degree(v);
        result.normalized[v] = deg > 0 ? result.trust[v] / static_cast<double>(deg) : 0.0;
    }
    return result;
}

PriorAssignment sybilbelief_priors(const UndirectedGraph& g,
                                   const std::vector<NodeId>& benign_seeds,
                                   const std::vector<NodeId>& sybil_seeds) {
    PriorAssignment priors;
    priors.node_prior.assign(g.node_count(), 0.5);
    for (NodeId v : benign_seeds) priors.node_prior[v] = 0.9;
    for (NodeId v : sybil_seeds) priors.node_prior[v] = 0.1;
    priors.edge_prior.assign(g.edge_count(), 0.9);
    return priors;
}

}  // namespace sybilframe
