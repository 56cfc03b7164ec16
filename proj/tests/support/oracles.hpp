#pragma once

// Brute-force oracles kept independent of the library code paths they check.

#include <cmath>
#include <cstddef>
#include <vector>

#include "sybilframe/graph.hpp"
#include "sybilframe/inference.hpp"

namespace oracle {

using sybilframe::Edge;
using sybilframe::Label;
using sybilframe::LabelMap;
using sybilframe::NodeId;
using sybilframe::UndirectedGraph;

// Exact per-node marginals of the benign state by enumerating all 2^n joint
// assignments of the pairwise model. Potentials are written out inline here
// on purpose. Only usable for small n.
inline std::vector<double> enumerate_marginals(const UndirectedGraph& g,
                                               const std::vector<double>& node_prior,
                                               const std::vector<double>& edge_prior) {
    const std::size_t n = g.node_count();
    std::vector<double> benign_mass(n, 0.0);
    double z = 0.0;
    for (std::size_t assignment = 0; assignment < (std::size_t{1} << n); ++assignment) {
        double weight = 1.0;
        for (std::size_t v = 0; v < n; ++v) {
            const bool benign = assignment >> v & 1;
            weight *= benign ? node_prior[v] : 1.0 - node_prior[v];
        }
        for (std::size_t id = 0; id < g.edges().size(); ++id) {
            const Edge& e = g.edges()[id];
            const bool same = ((assignment >> e.u) & 1) == ((assignment >> e.v) & 1);
            weight *= same ? edge_prior[id] : 1.0 - edge_prior[id];
        }
        z += weight;
        for (std::size_t v = 0; v < n; ++v)
            if (assignment >> v & 1) benign_mass[v] += weight;
    }
    for (double& b : benign_mass) b /= z;
    return benign_mass;
}

// All-pairs comparison: P(random benign score > random Sybil score), ties 0.5.
inline double brute_force_auc(const std::vector<double>& scores, const LabelMap& truth) {
    double favorable = 0.0;
    std::size_t pairs = 0;
    for (std::size_t b = 0; b < truth.size(); ++b) {
        if (truth[b] != Label::Benign) continue;
        for (std::size_t s = 0; s < truth.size(); ++s) {
            if (truth[s] != Label::Sybil) continue;
            ++pairs;
            if (scores[b] > scores[s])
                favorable += 1.0;
            else if (scores[b] == scores[s])
                favorable += 0.5;
        }
    }
    return favorable / static_cast<double>(pairs);
}

// Adjacency-matrix form of two-community modularity:
//   Q = (1/2m) * sum_{i,j} (A_ij - k_i k_j / 2m) [c_i == c_j]
inline double matrix_modularity(const UndirectedGraph& g, const LabelMap& partition) {
    const double two_m = 2.0 * static_cast<double>(g.edge_count());
    double q = 0.0;
    for (NodeId i = 0; i < g.node_count(); ++i) {
        for (NodeId j = 0; j < g.node_count(); ++j) {
            if (partition[i] != partition[j]) continue;
            const double a = g.has_edge(i, j) ? 1.0 : 0.0;
            q += a - static_cast<double>(g.degree(i)) * static_cast<double>(g.degree(j)) / two_m;
        }
    }
    return q / two_m;
}

}  // namespace oracle
