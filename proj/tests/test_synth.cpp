#include <algorithm>
#include <set>

#include "doctest.h"
#include "sybilframe/errors.hpp"
#include "sybilframe/rng.hpp"
#include "sybilframe/synth.hpp"

using namespace sybilframe;

TEST_CASE("preferential attachment region") {
    SUBCASE("exact edge count: (m+1)-clique plus m per arrival") {
        Rng rng(1);
        auto g = generate_pa_region(1000, 10, rng);
        // m = 5: C(6,2) = 15 seed edges, 994 arrivals x 5 edges = 4970
        CHECK(g.edge_count() == 15 + 4970);
        CHECK(g.node_count() == 1000);
        double avg = 2.0 * g.edge_count() / g.node_count();
        CHECK(avg == doctest::Approx(10.0).epsilon(0.01));
    }
    SUBCASE("region smaller than the degree target is a config error") {
        Rng rng(1);
        CHECK_THROWS_AS(generate_pa_region(6, 10, rng), ConfigError);
        CHECK_THROWS_AS(generate_pa_region(100, 7, rng), ConfigError);  // odd degree
    }
    SUBCASE("same seed, same graph") {
        Rng a(42), b(42);
        auto ga = generate_pa_region(200, 6, a);
        auto gb = generate_pa_region(200, 6, b);
        CHECK(ga.edges() == gb.edges());
    }
    SUBCASE("heavy-tailed degrees: hubs well above the average") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            Rng rng(seed);
            auto g = generate_pa_region(1000, 10, rng);
            std::size_t max_degree = 0;
            for (NodeId v = 0; v < g.node_count(); ++v)
                max_degree = std::max(max_degree, g.degree(v));
            CHECK(max_degree >= 30);
        }
    }
}

TEST_CASE("attack edge wiring") {
    Rng rng(5);
    auto benign = generate_pa_region(100, 4, rng);
    auto sybil = generate_pa_region(40, 4, rng);

    SUBCASE("zero attack edges leaves the union disconnected") {
        auto inst = wire_attack_edges(benign, sybil, 0, rng);
        CHECK(inst.attack_edges.empty());
        CHECK(inst.graph.edge_count() == benign.edge_count() + sybil.edge_count());
    }
    SUBCASE("exact distinct cross-edge count") {
        auto inst = wire_attack_edges(benign, sybil, 500, rng);
        CHECK(inst.attack_edges.size() == 500);
        std::set<Edge> unique(inst.attack_edges.begin(), inst.attack_edges.end());
        CHECK(unique.size() == 500);
        for (const Edge& e : inst.attack_edges) {
            CHECK(inst.truth[e.u] != inst.truth[e.v]);
            CHECK(inst.graph.has_edge(e.u, e.v));
        }
    }
    SUBCASE("saturation gives the complete cross wiring") {
        Rng small_rng(9);
        auto b2 = generate_pa_region(10, 4, small_rng);
        auto s2 = generate_pa_region(8, 4, small_rng);
        auto inst = wire_attack_edges(b2, s2, 80, small_rng);
        CHECK(inst.attack_edges.size() == 80);
        for (NodeId u = 0; u < 10; ++u)
            for (NodeId v = 10; v < 18; ++v) CHECK(inst.graph.has_edge(u, v));
    }
    SUBCASE("too many attack edges is a config error") {
        CHECK_THROWS_AS(wire_attack_edges(benign, sybil, 100 * 40 + 1, rng), ConfigError);
    }
    SUBCASE("attack set equals the cross-label edge set") {
        auto inst = wire_attack_edges(benign, sybil, 300, rng);
        std::vector<Edge> cross;
        for (const Edge& e : inst.graph.edges())
            if (inst.truth[e.u] != inst.truth[e.v]) cross.push_back(e);
        std::vector<Edge> attack = inst.attack_edges;
        std::sort(attack.begin(), attack.end());
        CHECK(attack == cross);
    }
    SUBCASE("truth labels follow the region layout") {
        auto inst = wire_attack_edges(benign, sybil, 10, rng);
        CHECK(inst.benign_size() == 100);
        CHECK(count_label(inst.truth, Label::Benign) == 100);
        CHECK(count_label(inst.truth, Label::Sybil) == 40);
    }
}

TEST_CASE("trust seed selection") {
    Rng rng(17);
    auto benign = generate_pa_region(100, 4, rng);
    auto sybil = generate_pa_region(40, 4, rng);
    auto inst = wire_attack_edges(benign, sybil, 50, rng);

    std::set<NodeId> endpoints;
    for (const Edge& e : inst.attack_edges) {
        endpoints.insert(e.u);
        endpoints.insert(e.v);
    }

    SUBCASE("avoided seeds are never attack-edge endpoints") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            SyntheticInstance copy = inst;
            Rng r(seed);
            select_trust_seeds(copy, SeedScenario::Avoided, SeedScenario::Avoided, 3, 3, r);
            for (NodeId v : copy.benign_trust_seeds) CHECK(endpoints.count(v) == 0);
            for (NodeId v : copy.sybil_trust_seeds) CHECK(endpoints.count(v) == 0);
            CHECK(copy.benign_trust_seeds.size() == 3);
        }
    }
    SUBCASE("targeted seeds always are") {
        SyntheticInstance copy = inst;
        Rng r(3);
        select_trust_seeds(copy, SeedScenario::Targeted, SeedScenario::Targeted, 2, 2, r);
        for (NodeId v : copy.benign_trust_seeds) CHECK(endpoints.count(v) == 1);
        for (NodeId v : copy.sybil_trust_seeds) CHECK(endpoints.count(v) == 1);
    }
    SUBCASE("targeting without attack edges is a config error") {
        auto empty = wire_attack_edges(benign, sybil, 0, rng);
        Rng r(3);
        CHECK_THROWS_AS(
            select_trust_seeds(empty, SeedScenario::Targeted, SeedScenario::Uniform, 1, 1, r),
            ConfigError);
    }
    SUBCASE("draws are reproducible and without replacement") {
        SyntheticInstance a = inst, b = inst;
        Rng ra(99), rb(99);
        select_trust_seeds(a, SeedScenario::Uniform, SeedScenario::Uniform, 20, 20, ra);
        select_trust_seeds(b, SeedScenario::Uniform, SeedScenario::Uniform, 20, 20, rb);
        CHECK(a.benign_trust_seeds == b.benign_trust_seeds);
        CHECK(a.sybil_trust_seeds == b.sybil_trust_seeds);
        std::set<NodeId> unique(a.benign_trust_seeds.begin(), a.benign_trust_seeds.end());
        CHECK(unique.size() == 20);
    }
}

TEST_CASE("full instance generation is reproducible") {
    SyntheticConfig config;
    config.benign_size = 150;
    config.sybil_size = 60;
    config.avg_degree = 6;
    config.attack_edges = 120;
    Rng a(1234), b(1234);
    auto ia = generate_instance(config, a);
    auto ib = generate_instance(config, b);
    CHECK(ia.graph.edges() == ib.graph.edges());
    CHECK(ia.attack_edges == ib.attack_edges);
    CHECK(ia.benign_trust_seeds == ib.benign_trust_seeds);
}
