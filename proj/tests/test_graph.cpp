#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "support/oracles.hpp"
#include "sybilframe/errors.hpp"
#include "sybilframe/graph.hpp"
#include "sybilframe/graph_io.hpp"
#include "sybilframe/rng.hpp"

using namespace sybilframe;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    auto path = (std::filesystem::temp_directory_path() / name).string();
    std::ofstream out(path);
    out << content;
    return path;
}

UndirectedGraph random_graph(Rng& rng, NodeId n, double edge_prob) {
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v)
            if (rng.bernoulli(edge_prob)) edges.push_back({u, v});
    return UndirectedGraph::from_edges(n, std::move(edges));
}

}  // namespace

TEST_CASE("edge list loading") {
    SUBCASE("plain read") {
        auto path = write_temp("g1.edges", "0 1\n1 2\n");
        auto result = load_undirected_edge_list(path);
        CHECK(result.graph.node_count() == 3);
        CHECK(result.graph.edge_count() == 2);
    }
    SUBCASE("duplicates dropped") {
        auto path = write_temp("g2.edges", "0 1\n0 1\n");
        auto result = load_undirected_edge_list(path);
        CHECK(result.graph.node_count() == 2);
        CHECK(result.graph.edge_count() == 1);
    }
    SUBCASE("ids remapped to a contiguous range") {
        auto path = write_temp("g3.edges", "5 7\n7 9\n");
        auto result = load_undirected_edge_list(path);
        CHECK(result.graph.node_count() == 3);
        CHECK(result.graph.edge_count() == 2);
        CHECK(result.remap.to_original == std::vector<std::uint64_t>{5, 7, 9});
    }
    SUBCASE("self loops counted and skipped") {
        auto path = write_temp("g4.edges", "0 0\n0 1\n1 1\n");
        auto result = load_undirected_edge_list(path);
        CHECK(result.self_loops_skipped == 2);
        CHECK(result.graph.edge_count() == 1);
    }
    SUBCASE("node count header covers isolated nodes") {
        auto path = write_temp("g5.edges", "#nodes 5\n0 1\n");
        auto result = load_undirected_edge_list(path);
        CHECK(result.graph.node_count() == 5);
        CHECK(result.graph.degree(4) == 0);
    }
    SUBCASE("malformed line reports its number") {
        auto path = write_temp("g6.edges", "0 1\nnot an edge\n");
        CHECK_THROWS_AS(load_undirected_edge_list(path), ParseError);
        try {
            load_undirected_edge_list(path);
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
        }
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_undirected_edge_list("/nonexistent/file"), InputError);
    }
}

TEST_CASE("edge list round trip preserves the edge set") {
    Rng rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        UndirectedGraph g = random_graph(rng, 20, 0.2);
        auto path = write_temp("roundtrip.edges", "");
        save_edge_list(g, path);
        auto loaded = load_undirected_edge_list(path);
        CHECK(loaded.graph.edges() == g.edges());
        CHECK(loaded.graph.node_count() == g.node_count());
    }
}

TEST_CASE("label file round trip") {
    LabelMap labels = {Label::Benign, Label::Sybil, Label::Unknown, Label::Benign};
    auto path = write_temp("labels.txt", "");
    save_labels(labels, path);
    CHECK(load_labels(path, 4) == labels);

    auto bad = write_temp("labels_bad.txt", "0 spam\n");
    CHECK_THROWS_AS(load_labels(bad, 4), ParseError);
}

TEST_CASE("adjacency invariants") {
    auto g = UndirectedGraph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}, {3, 1}});
    for (NodeId v = 0; v < 4; ++v) {
        auto nb = g.neighbors(v);
        CHECK(std::is_sorted(nb.begin(), nb.end()));
        for (NodeId w : nb) CHECK(g.has_edge(w, v));
        CHECK(g.degree(v) == nb.size());
    }
    CHECK(g.edge_count() == 5);
    CHECK_FALSE(g.has_edge(0, 2));
}

TEST_CASE("mutualize") {
    SUBCASE("single reciprocated pair") {
        auto d = DirectedGraph::from_arcs(3, {{0, 1}, {1, 0}, {1, 2}});
        auto g = mutualize(d);
        CHECK(g.edges() == std::vector<Edge>{{0, 1}});
    }
    SUBCASE("empty") {
        auto g = mutualize(DirectedGraph::from_arcs(3, {}));
        CHECK(g.edge_count() == 0);
    }
    SUBCASE("two reciprocated pairs") {
        auto d = DirectedGraph::from_arcs(3, {{0, 1}, {1, 0}, {2, 1}, {1, 2}});
        auto g = mutualize(d);
        CHECK(g.edges() == std::vector<Edge>{{0, 1}, {1, 2}});
    }
    SUBCASE("symmetrized arc set reads back as the undirected graph") {
        Rng rng(3);
        for (int trial = 0; trial < 10; ++trial) {
            UndirectedGraph g = random_graph(rng, 15, 0.3);
            std::vector<DirectedGraph::Arc> arcs;
            for (const Edge& e : g.edges()) {
                arcs.push_back({e.u, e.v});
                arcs.push_back({e.v, e.u});
            }
            auto back = mutualize(DirectedGraph::from_arcs(15, std::move(arcs)));
            CHECK(back.edges() == g.edges());
        }
    }
}

TEST_CASE("largest connected component") {
    SUBCASE("keeps the bigger side") {
        auto g = UndirectedGraph::from_edges(5, {{0, 1}, {1, 2}, {3, 4}});
        auto lcc = largest_connected_component(g);
        CHECK(lcc.graph.node_count() == 3);
        CHECK(lcc.to_original == std::vector<NodeId>{0, 1, 2});
        CHECK(lcc.from_original[3] == kInvalidNode);
    }
    SUBCASE("identity on a connected graph") {
        auto g = UndirectedGraph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
        auto lcc = largest_connected_component(g);
        CHECK(lcc.graph.edges() == g.edges());
    }
    SUBCASE("size tie goes to the component with the smallest id") {
        auto g = UndirectedGraph::from_edges(4, {{0, 3}, {1, 2}});
        auto lcc = largest_connected_component(g);
        CHECK(lcc.graph.node_count() == 2);
        CHECK(lcc.to_original == std::vector<NodeId>{0, 3});
    }
    SUBCASE("idempotent") {
        Rng rng(11);
        for (int trial = 0; trial < 10; ++trial) {
            UndirectedGraph g = random_graph(rng, 25, 0.08);
            auto once = largest_connected_component(g);
            auto twice = largest_connected_component(once.graph);
            CHECK(twice.graph.edges() == once.graph.edges());
            CHECK(twice.graph.node_count() == once.graph.node_count());
        }
    }
    SUBCASE("empty graph") {
        auto lcc = largest_connected_component(UndirectedGraph::from_edges(0, {}));
        CHECK(lcc.graph.node_count() == 0);
    }
}

TEST_CASE("clustering coefficient") {
    auto triangle = UndirectedGraph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}});
    CHECK(clustering_coefficient(triangle, 0) == 1.0);
    CHECK(clustering_coefficient(triangle, 2) == 1.0);

    auto star = UndirectedGraph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}});
    CHECK(clustering_coefficient(star, 0) == 0.0);
    CHECK(clustering_coefficient(star, 1) == 0.0);  // degree < 2

    // v = 0 with neighbors {1, 2, 3} and only the (1, 2) edge among them
    auto g = UndirectedGraph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}});
    CHECK(clustering_coefficient(g, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    SUBCASE("bounded in [0,1] and 1 on clique nodes") {
        Rng rng(5);
        for (int trial = 0; trial < 10; ++trial) {
            UndirectedGraph r = random_graph(rng, 12, 0.4);
            for (NodeId v = 0; v < r.node_count(); ++v) {
                double c = clustering_coefficient(r, v);
                CHECK(c >= 0.0);
                CHECK(c <= 1.0);
            }
        }
        auto k5 = UndirectedGraph::from_edges(
            5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}});
        for (NodeId v = 0; v < 5; ++v) CHECK(clustering_coefficient(k5, v) == 1.0);
    }
}

TEST_CASE("modularity") {
    auto two_triangles =
        UndirectedGraph::from_edges(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
    LabelMap split = {Label::Benign, Label::Benign, Label::Benign,
                      Label::Sybil,  Label::Sybil,  Label::Sybil};
    CHECK(modularity(two_triangles, split) == doctest::Approx(0.5).epsilon(1e-12));

    LabelMap all_one(6, Label::Benign);
    CHECK(modularity(two_triangles, all_one) == 0.0);

    SUBCASE("zero-edge graph is an error") {
        auto empty = UndirectedGraph::from_edges(3, {});
        CHECK_THROWS_AS(modularity(empty, LabelMap(3, Label::Benign)), InputError);
    }
    SUBCASE("unknown label is an error") {
        LabelMap bad = split;
        bad[0] = Label::Unknown;
        CHECK_THROWS_AS(modularity(two_triangles, bad), InputError);
    }
    SUBCASE("matches the adjacency-matrix formula on random graphs") {
        Rng rng(23);
        for (int trial = 0; trial < 30; ++trial) {
            UndirectedGraph g = random_graph(rng, 10, 0.4);
            if (g.edge_count() == 0) continue;
            LabelMap labels(10);
            for (auto& l : labels) l = rng.bernoulli(0.5) ? Label::Benign : Label::Sybil;
            const double q = modularity(g, labels);
            CHECK(q == doctest::Approx(oracle::matrix_modularity(g, labels)).epsilon(1e-12));
            CHECK(q >= -0.5);
            CHECK(q <= 1.0);
        }
    }
    SUBCASE("random labels on K4 are never positive") {
        auto k4 = UndirectedGraph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
        Rng rng(29);
        for (int trial = 0; trial < 20; ++trial) {
            LabelMap labels(4);
            for (auto& l : labels) l = rng.bernoulli(0.5) ? Label::Benign : Label::Sybil;
            CHECK(modularity(k4, labels) <= 1e-15);
        }
    }
}
