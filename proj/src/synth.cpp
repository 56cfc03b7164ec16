#include "sybilframe/synth.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include "sybilframe/errors.hpp"
#include "sybilframe/graph_io.hpp"

namespace sybilframe {

const char* seed_scenario_name(SeedScenario s) {
    switch (s) {
        case SeedScenario::Uniform: return "uniform";
        case SeedScenario::Avoided: return "si";
        default: return "sii";
    }
}

void SyntheticConfig::validate() const {
    if (avg_degree < 2 || avg_degree % 2 != 0)
        throw ConfigError("avg_degree must be even and >= 2");
    if (benign_size <= avg_degree || sybil_size <= avg_degree)
        throw ConfigError("region sizes must exceed avg_degree");
    if (attack_edges > static_cast<std::size_t>(benign_size) * sybil_size)
        throw ConfigError("attack_edges exceeds the number of cross-region pairs");
    if (benign_seeds == 0 || sybil_seeds == 0)
        throw ConfigError("at least one trust seed per region is required");
}

NodeId SyntheticInstance::benign_size() const {
    NodeId n = 0;
    while (n < truth.size() && truth[n] == Label::Benign) ++n;
    return n;
}

UndirectedGraph generate_pa_region(NodeId n, std::size_t avg_degree, Rng& rng) {
    if (avg_degree < 2 || avg_degree % 2 != 0)
        throw ConfigError("avg_degree must be even and >= 2");
    const std::size_t m = avg_degree / 2;
    if (n <= avg_degree) throw ConfigError("region size must exceed avg_degree");

    std::vector<Edge> edges;
    edges.reserve(m * n);
    // One entry per degree unit; sampling an entry uniformly picks a node
    // with probability proportional to its current degree.
    std::vector<NodeId> stubs;
    stubs.reserve(2 * m * n);

    for (NodeId u = 0; u + 1 < m + 1; ++u) {
        for (NodeId v = u + 1; v < m + 1; ++v) {
            edges.push_back({u, v});
            stubs.push_back(u);
            stubs.push_back(v);
        }
    }

    std::vector<NodeId> chosen;
    for (NodeId v = static_cast<NodeId>(m + 1); v < n; ++v) {
        chosen.clear();
        while (chosen.size() < m) {
            NodeId target = stubs[rng.uniform_index(stubs.size())];
            if (std::find(chosen.begin(), chosen.end(), target) == chosen.end())
                chosen.push_back(target);
        }
        for (NodeId target : chosen) {
            edges.push_back(make_edge(target, v));
            stubs.push_back(target);
            stubs.push_back(v);
        }
    }
    return UndirectedGraph::from_edges(n, std::move(edges));
}

SyntheticInstance wire_attack_edges(const UndirectedGraph& benign, const UndirectedGraph& sybil,
                                    std::size_t k, Rng& rng) {
    const NodeId nb = benign.node_count();
    const NodeId ns = sybil.node_count();
    const std::size_t total_pairs = static_cast<std::size_t>(nb) * ns;
    if (k > total_pairs) throw ConfigError("attack edge count exceeds cross-region pairs");

    SyntheticInstance inst;
    inst.truth.assign(static_cast<std::size_t>(nb) + ns, Label::Benign);
    std::fill(inst.truth.begin() + nb, inst.truth.end(), Label::Sybil);

    std::vector<Edge> edges = benign.edges();
    edges.reserve(edges.size() + sybil.edge_count() + k);
    for (const Edge& e : sybil.edges()) edges.push_back({e.u + nb, e.v + nb});

    inst.attack_edges.reserve(k);
    if (k > total_pairs / 2) {
        // Rejection would thrash near saturation; sample from the enumerated
        // pair list instead.
        std::vector<std::size_t> pairs(total_pairs);
        for (std::size_t i = 0; i < total_pairs; ++i) pairs[i] = i;
        pairs = rng.sample_without_replacement(std::move(pairs), k);
        for (std::size_t p : pairs)
            inst.attack_edges.push_back(
                {static_cast<NodeId>(p / ns), static_cast<NodeId>(nb + p % ns)});
    } else {
        std::unordered_set<std::uint64_t> used;
        used.reserve(k * 2);
        while (inst.attack_edges.size() < k) {
            NodeId u = static_cast<NodeId>(rng.uniform_index(nb));
            NodeId v = static_cast<NodeId>(nb + rng.uniform_index(ns));
            std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | v;
            if (used.insert(key).second) inst.attack_edges.push_back({u, v});
        }
    }
    std::sort(inst.attack_edges.begin(), inst.attack_edges.end());
    edges.insert(edges.end(), inst.attack_edges.begin(), inst.attack_edges.end());
    inst.graph = UndirectedGraph::from_edges(nb + ns, std::move(edges));
    return inst;
}

namespace {

std::vector<NodeId> scenario_pool(const SyntheticInstance& inst, Label region,
                                  SeedScenario scenario) {
    std::vector<char> is_endpoint(inst.truth.size(), 0);
    for (const Edge& e : inst.attack_edges) {
        is_endpoint[e.u] = 1;
        is_endpoint[e.v] = 1;
    }
    std::vector<NodeId> pool;
    for (NodeId v = 0; v < inst.truth.size(); ++v) {
        if (inst.truth[v] != region) continue;
        switch (scenario) {
            case SeedScenario::Uniform: pool.push_back(v); break;
            case SeedScenario::Avoided:
                if (!is_endpoint[v]) pool.push_back(v);
                break;
            case SeedScenario::Targeted:
                if (is_endpoint[v]) pool.push_back(v);
                break;
        }
    }
    return pool;
}

}  // namespace

void select_trust_seeds(SyntheticInstance& inst, SeedScenario benign_scenario,
                        SeedScenario sybil_scenario, std::size_t benign_count,
                        std::size_t sybil_count, Rng& rng) {
    auto benign_pool = scenario_pool(inst, Label::Benign, benign_scenario);
    auto sybil_pool = scenario_pool(inst, Label::Sybil, sybil_scenario);
    if (benign_pool.size() < benign_count)
        throw ConfigError("not enough benign seed candidates for the requested scenario");
    if (sybil_pool.size() < sybil_count)
        throw ConfigError("not enough Sybil seed candidates for the requested scenario");
    inst.benign_trust_seeds = rng.sample_without_replacement(std::move(benign_pool), benign_count);
    inst.sybil_trust_seeds = rng.sample_without_replacement(std::move(sybil_pool), sybil_count);
    std::sort(inst.benign_trust_seeds.begin(), inst.benign_trust_seeds.end());
    std::sort(inst.sybil_trust_seeds.begin(), inst.sybil_trust_seeds.end());
}

SyntheticInstance generate_instance(const SyntheticConfig& config, Rng& rng) {
    config.validate();
    UndirectedGraph benign = generate_pa_region(config.benign_size, config.avg_degree, rng);
    UndirectedGraph sybil = generate_pa_region(config.sybil_size, config.avg_degree, rng);
    SyntheticInstance inst = wire_attack_edges(benign, sybil, config.attack_edges, rng);
    select_trust_seeds(inst, config.benign_scenario, config.sybil_scenario, config.benign_seeds,
                       config.sybil_seeds, rng);
    return inst;
}

void write_instance(const SyntheticInstance& inst, const std::string& prefix) {
    save_edge_list(inst.graph, prefix + ".edges");
    save_labels(inst.truth, prefix + ".labels");

    std::ofstream attack(prefix + ".attack");
    if (!attack) throw InputError("cannot write " + prefix + ".attack");
    for (const Edge& e : inst.attack_edges) attack << e.u << " " << e.v << "\n";

    std::ofstream seeds(prefix + ".seeds");
    if (!seeds) throw InputError("cannot write " + prefix + ".seeds");
    for (NodeId v : inst.benign_trust_seeds) seeds << v << " benign\n";
    for (NodeId v : inst.sybil_trust_seeds) seeds << v << " sybil\n";
}

}  // namespace sybilframe
