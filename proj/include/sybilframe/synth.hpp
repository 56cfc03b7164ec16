#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sybilframe/graph.hpp"
#include "sybilframe/rng.hpp"

namespace sybilframe {

enum class SeedScenario : std::uint8_t {
    Uniform,   // seeds drawn uniformly from the region
    Avoided,   // SI: seeds are never endpoints of attack edges
    Targeted,  // SII: seeds are always endpoints of attack edges
};

const char* seed_scenario_name(SeedScenario s);

struct SyntheticConfig {
    NodeId benign_size = 1000;
    NodeId sybil_size = 400;
    std::size_t avg_degree = 10;  // must be even and >= 2
    std::size_t attack_edges = 1000;
    std::uint64_t rng_seed = 0;
    SeedScenario benign_scenario = SeedScenario::Uniform;
    SeedScenario sybil_scenario = SeedScenario::Uniform;
    std::size_t benign_seeds = 1;
    std::size_t sybil_seeds = 1;

    void validate() const;  // throws ConfigError
};

// A generated two-region topology: benign nodes occupy ids [0, benign_size),
// Sybil nodes the rest. attack_edges holds exactly the cross-region edges.
struct SyntheticInstance {
    UndirectedGraph graph;
    LabelMap truth;
    std::vector<Edge> attack_edges;
    std::vector<NodeId> benign_trust_seeds;
    std::vector<NodeId> sybil_trust_seeds;

    NodeId benign_size() const;
};

// Preferential-attachment region: an (m+1)-clique seed with m = avg_degree/2,
// then each arriving node attaches m edges to distinct existing nodes chosen
// with probability proportional to current degree.
UndirectedGraph generate_pa_region(NodeId n, std::size_t avg_degree, Rng& rng);

// Disjoint union of the two regions plus k distinct uniformly sampled
// cross-region edges. Trust seeds are left empty.
SyntheticInstance wire_attack_edges(const UndirectedGraph& benign, const UndirectedGraph& sybil,
                                    std::size_t k, Rng& rng);

// Draws trust seeds for both regions without replacement, honoring the
// per-class scenario (endpoint avoidance/targeting is relative to
// inst.attack_edges). Throws ConfigError when a candidate pool is too small.
void select_trust_seeds(SyntheticInstance& inst, SeedScenario benign_scenario,
                        SeedScenario sybil_scenario, std::size_t benign_count,
                        std::size_t sybil_count, Rng& rng);

// Full pipeline for one instance under a config (region generation, attack
// wiring, seed selection), all randomness drawn from rng.
SyntheticInstance generate_instance(const SyntheticConfig& config, Rng& rng);

// Writes <prefix>.edges, <prefix>.labels, <prefix>.attack, <prefix>.seeds.
void write_instance(const SyntheticInstance& inst, const std::string& prefix);

}  // namespace sybilframe
