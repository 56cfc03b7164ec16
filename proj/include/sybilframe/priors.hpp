#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sybilframe/graph.hpp"
#include "sybilframe/rng.hpp"

namespace sybilframe {

// All prior probabilities are clamped into [kPriorClamp, 1 - kPriorClamp];
// fully deterministic 0/1 priors make message products degenerate.
inline constexpr double kPriorClamp = 1e-3;

double clamp_prior(double p);

// Per-node probability of being benign and per-edge probability that the
// endpoints share a label (> 0.5 homophily, < 0.5 antagonism). Edge priors are
// indexed by undirected edge id.
struct PriorAssignment {
    std::vector<double> node_prior;
    std::vector<double> edge_prior;
};

// Emulated external classifier quality: rates at which benign nodes (or
// same-label edges) are scored on the wrong side and vice versa.
struct NoiseModel {
    double fpr = 0.0;
    double fnr = 0.0;

    void validate() const;  // rates must lie in [0, 0.5]
};

// Randomized node priors for a labeled instance: trust seeds get 0.9/0.1 and
// everything else a uniform draw on the correct or incorrect side of 0.5
// according to the noise model. Nodes are visited in id order.
std::vector<double> synth_node_priors(const LabelMap& truth,
                                      const std::vector<NodeId>& benign_seeds,
                                      const std::vector<NodeId>& sybil_seeds,
                                      const NoiseModel& noise, Rng& rng);

// Randomized edge priors: seed-seed edges get 0.9/0.1 by label agreement,
// other edges a uniform draw on the homophilous or antagonistic side of 0.5
// according to the noise model. Edges are visited in edge-id order.
std::vector<double> synth_edge_priors(const UndirectedGraph& graph, const LabelMap& truth,
                                      const std::vector<NodeId>& benign_seeds,
                                      const std::vector<NodeId>& sybil_seeds,
                                      const NoiseModel& noise, Rng& rng);

// Structural node features. The request-accepted ratios come from the
// directed topology; clustering from the undirected one.
struct NodeFeatureVector {
    double req_in = 0.0;      // |in ∩ out| / |in|, 0 when no in-arcs
    double req_out = 0.0;     // |in ∩ out| / |out|, 0 when no out-arcs
    double clustering = 0.0;  // local clustering coefficient
};

inline constexpr std::size_t kNodeFeatureCount = 3;

NodeFeatureVector node_features(const DirectedGraph& directed, const UndirectedGraph& undirected,
                                NodeId v);

// Feature rows for every node of `undirected`; to_directed maps its ids into
// the directed graph (kInvalidNode entries yield zero request ratios).
std::vector<NodeFeatureVector> node_feature_matrix(const DirectedGraph& directed,
                                                   const UndirectedGraph& undirected,
                                                   const std::vector<NodeId>& to_directed);

// Neighborhood-similarity indices for a connected pair.
struct EdgeFeatureVector {
    double common_neighbors = 0.0;
    double cosine = 0.0;       // |∩| / sqrt(ku * kv)
    double jaccard = 0.0;      // |∩| / |Γ(u) ∪ Γ(v)|
    double adamic_adar = 0.0;  // Σ 1/k_s over common neighbors s
};

// use_log_degrees switches Adamic-Adar to the 1/ln(k_s) variant.
EdgeFeatureVector edge_features(const UndirectedGraph& g, NodeId u, NodeId v,
                                bool use_log_degrees = false);

double jaccard_index(const UndirectedGraph& g, NodeId u, NodeId v);

// Edge priors from Jaccard similarity: seed-seed edges are pinned to 0.9/0.1
// by seed label agreement; all other edges get their Jaccard index min-max
// scaled into [0.1, 0.9] over the observed range of non-seed edges (midpoint
// 0.5 when that range is degenerate).
std::vector<double> jaccard_edge_priors(const UndirectedGraph& g,
                                        const std::vector<NodeId>& benign_seeds,
                                        const std::vector<NodeId>& sybil_seeds);

// Edge prior inferred from node priors: 0.1 when the endpoints fall on
// opposite sides of 0.5, else 0.9. A prior of exactly 0.5 counts as benign.
std::vector<double> node_priors_to_edge_priors(const std::vector<double>& node_prior,
                                               const UndirectedGraph& g);

// Text serialization: "node_id prior" / "u v prior" per line.
void save_node_priors(const std::vector<double>& priors, const std::string& path);
std::vector<double> load_node_priors(const std::string& path, NodeId node_count);
void save_edge_priors(const UndirectedGraph& g, const std::vector<double>& priors,
                      const std::string& path);
std::vector<double> load_edge_priors(const UndirectedGraph& g, const std::string& path);

// CSV export with a header row: node_id,req_in,req_out,clustering.
void save_node_features_csv(const std::vector<NodeFeatureVector>& features,
                            const std::string& path);

}  // namespace sybilframe
