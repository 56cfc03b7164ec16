#pragma once

// Test fixture mimicking a real ego-network topology: many dense communities
// (high local clustering, so neighborhood similarity carries signal) joined
// by comparatively few bridge edges (so trust propagation cannot rely on fast
// mixing). Used where an experiment needs a realistic community-structured
// graph rather than a preferential-attachment one.

#include <vector>

#include "sybilframe/graph.hpp"
#include "sybilframe/rng.hpp"

namespace testsupport {

using sybilframe::Edge;
using sybilframe::NodeId;
using sybilframe::Rng;
using sybilframe::UndirectedGraph;

struct CommunityGraphOptions {
    NodeId communities = 80;
    NodeId community_size = 50;
    double intra_probability = 0.7;  // edge probability inside a community
    std::size_t bridge_edges = 600;  // random cross-community edges
};

inline UndirectedGraph make_community_graph(Rng& rng, const CommunityGraphOptions& opt = {}) {
    const NodeId n = opt.communities * opt.community_size;
    std::vector<Edge> edges;
    for (NodeId c = 0; c < opt.communities; ++c) {
        const NodeId base = c * opt.community_size;
        for (NodeId i = 0; i < opt.community_size; ++i)
            for (NodeId j = i + 1; j < opt.community_size; ++j)
                if (rng.bernoulli(opt.intra_probability)) edges.push_back({base + i, base + j});
    }
    std::size_t added = 0;
    while (added < opt.bridge_edges) {
        NodeId u = static_cast<NodeId>(rng.uniform_index(n));
        NodeId v = static_cast<NodeId>(rng.uniform_index(n));
        if (u == v || u / opt.community_size == v / opt.community_size) continue;
        edges.push_back(sybilframe::make_edge(u, v));
        ++added;
    }
    return UndirectedGraph::from_edges(n, std::move(edges));
}

}  // namespace testsupport
