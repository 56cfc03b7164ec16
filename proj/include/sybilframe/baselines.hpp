#pragma once

#include <vector>

#include "sybilframe/graph.hpp"
#include "sybilframe/priors.hpp"

namespace sybilframe {

// Degree-normalized trust propagation scores. Total raw trust is conserved
// across rounds; rankings ascend by the normalized score, so starved nodes
// (Sybils) come first.
struct TrustVector {
    std::vector<double> trust;       // raw trust mass
    std::vector<double> normalized;  // trust / degree
};

// Power-iteration trust spreading from benign seeds: total trust |V| is split
// equally over the seeds, then each round every node forwards its trust in
// equal shares to its neighbors. iterations < 0 selects ceil(log2 n).
// Throws ConfigError on an empty seed set. The graph should be connected.
TrustVector sybilrank(const UndirectedGraph& g, const std::vector<NodeId>& benign_seeds,
                      int iterations = -1);

// The trust-propagation-only prior assignment: 0.9/0.1 node priors on trust
// seeds, 0.5 elsewhere, homophily 0.9 on every edge. Feeding this to run_lbp
// realizes the SybilBelief baseline.
PriorAssignment sybilbelief_priors(const UndirectedGraph& g,
                                   const std::vector<NodeId>& benign_seeds,
                                   const std::vector<NodeId>& sybil_seeds);

}  // namespace sybilframe
