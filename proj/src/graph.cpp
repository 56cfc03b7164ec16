#include "sybilframe/graph.hpp"

#include <algorithm>
#include <numeric>

#include "sybilframe/errors.hpp"

namespace sybilframe {

UndirectedGraph UndirectedGraph::from_edges(NodeId node_count, std::vector<Edge> edges) {
    for (auto& e : edges) {
        if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::erase_if(edges, [](const Edge& e) { return e.u == e.v; });
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    UndirectedGraph g;
    g.node_count_ = node_count;
    g.edges_ = std::move(edges);

    g.offsets_.assign(node_count + 1, 0);
    for (const Edge& e : g.edges_) {
        if (e.v >= node_count) throw InputError("edge endpoint out of range");
        ++g.offsets_[e.u + 1];
        ++g.offsets_[e.v + 1];
    }
    std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());

    g.adjacency_.resize(g.offsets_[node_count]);
    g.edge_ids_.resize(g.offsets_[node_count]);
    // Sweeping the canonical edge order fills every adjacency list already
    // sorted: for a node w, all lower neighbors arrive (ascending) while
    // edges with min endpoint < w are processed, then its higher neighbors
    // (ascending) inside the min == w block.
    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (std::uint32_t id = 0; id < g.edges_.size(); ++id) {
        const Edge& e = g.edges_[id];
        g.adjacency_[cursor[e.u]] = e.v;
        g.edge_ids_[cursor[e.u]++] = id;
        g.adjacency_[cursor[e.v]] = e.u;
        g.edge_ids_[cursor[e.v]++] = id;
    }
    return g;
}

bool UndirectedGraph::has_edge(NodeId u, NodeId v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

DirectedGraph DirectedGraph::from_arcs(NodeId node_count, std::vector<Arc> arcs) {
    std::erase_if(arcs, [](const Arc& a) { return a.from == a.to; });
    std::sort(arcs.begin(), arcs.end());
    arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

    DirectedGraph g;
    g.node_count_ = node_count;
    g.arc_count_ = arcs.size();

    g.out_offsets_.assign(node_count + 1, 0);
    g.in_offsets_.assign(node_count + 1, 0);
    for (const Arc& a : arcs) {
        if (a.from >= node_count || a.to >= node_count)
            throw InputError("arc endpoint out of range");
        ++g.out_offsets_[a.from + 1];
        ++g.in_offsets_[a.to + 1];
    }
    std::partial_sum(g.out_offsets_.begin(), g.out_offsets_.end(), g.out_offsets_.begin());
    std::partial_sum(g.in_offsets_.begin(), g.in_offsets_.end(), g.in_offsets_.begin());

    g.out_.resize(arcs.size());
    g.in_.resize(arcs.size());
    std::vector<std::size_t> out_cursor(g.out_offsets_.begin(), g.out_offsets_.end() - 1);
    std::vector<std::size_t> in_cursor(g.in_offsets_.begin(), g.in_offsets_.end() - 1);
    for (const Arc& a : arcs) {
        g.out_[out_cursor[a.from]++] = a.to;
        g.in_[in_cursor[a.to]++] = a.from;
    }
    for (NodeId v = 0; v < node_count; ++v)
        std::sort(g.in_.begin() + g.in_offsets_[v], g.in_.begin() + g.in_offsets_[v + 1]);
    return g;
}

bool DirectedGraph::has_arc(NodeId from, NodeId to) const {
    auto nb = out_neighbors(from);
    return std::binary_search(nb.begin(), nb.end(), to);
}

UndirectedGraph mutualize(const DirectedGraph& g) {
    std::vector<Edge> edges;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        for (NodeId v : g.out_neighbors(u)) {
            if (u < v && g.has_arc(v, u)) edges.push_back({u, v});
        }
    }
    return UndirectedGraph::from_edges(g.node_count(), std::move(edges));
}

ComponentResult largest_connected_component(const UndirectedGraph& g) {
    const NodeId n = g.node_count();
    std::vector<NodeId> component(n, kInvalidNode);
    std::vector<NodeId> queue;
    NodeId best_root = kInvalidNode;
    std::size_t best_size = 0;
    NodeId component_count = 0;

    for (NodeId start = 0; start < n; ++start) {
        if (component[start] != kInvalidNode) continue;
        const NodeId id = component_count++;
        std::size_t size = 0;
        queue.assign(1, start);
        component[start] = id;
        while (!queue.empty()) {
            NodeId v = queue.back();
            queue.pop_back();
            ++size;
            for (NodeId w : g.neighbors(v)) {
                if (component[w] == kInvalidNode) {
                    component[w] = id;
                    queue.push_back(w);
                }
            }
        }
        // Strictly-greater keeps the component with the smallest minimum id
        // on ties, since starts are visited in ascending order.
        if (size > best_size) {
            best_size = size;
            best_root = start;
        }
    }

    ComponentResult result;
    result.from_original.assign(n, kInvalidNode);
    if (best_root == kInvalidNode) return result;

    const NodeId keep = component[best_root];
    for (NodeId v = 0; v < n; ++v) {
        if (component[v] == keep) {
            result.from_original[v] = static_cast<NodeId>(result.to_original.size());
            result.to_original.push_back(v);
        }
    }
    std::vector<Edge> edges;
    for (const Edge& e : g.edges()) {
        if (component[e.u] == keep)
            edges.push_back({result.from_original[e.u], result.from_original[e.v]});
    }
    result.graph =
        UndirectedGraph::from_edges(static_cast<NodeId>(result.to_original.size()), std::move(edges));
    return result;
}

std::size_t count_common_neighbors(const UndirectedGraph& g, NodeId u, NodeId v) {
    auto a = g.neighbors(u);
    auto b = g.neighbors(v);
    std::size_t count = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j])
            ++i;
        else if (a[i] > b[j])
            ++j;
        else {
            ++count;
            ++i;
            ++j;
        }
    }
    return count;
}

double clustering_coefficient(const UndirectedGraph& g, NodeId v) {
    const std::size_t k = g.degree(v);
    if (k < 2) return 0.0;
    std::size_t links = 0;
    for (NodeId w : g.neighbors(v)) links += count_common_neighbors(g, v, w);
    // Each edge among neighbors is seen from both of its endpoints.
    return static_cast<double>(links) / (static_cast<double>(k) * static_cast<double>(k - 1));
}

double modularity(const UndirectedGraph& g, const LabelMap& partition) {
    const std::size_t m = g.edge_count();
    if (m == 0) throw InputError("modularity is undefined on a zero-edge graph");
    if (partition.size() != g.node_count())
        throw InputError("partition does not cover every node");

    double intra[2] = {0.0, 0.0};
    double degree_total[2] = {0.0, 0.0};
    auto side = [&](NodeId v) -> int {
        switch (partition[v]) {
            case Label::Benign: return 0;
            case Label::Sybil: return 1;
            default: throw InputError("modularity partition contains an Unknown label");
        }
    };
    for (const Edge& e : g.edges()) {
        if (side(e.u) == side(e.v)) intra[side(e.u)] += 1.0;
    }
    for (NodeId v = 0; v < g.node_count(); ++v)
        degree_total[side(v)] += static_cast<double>(g.degree(v));

    const double md = static_cast<double>(m);
    double q = 0.0;
    for (int c = 0; c < 2; ++c) {
        const double share = degree_total[c] / (2.0 * md);
        q += intra[c] / md - share * share;
    }
    return q;
}

std::size_t count_label(const LabelMap& labels, Label which) {
    std::size_t n = 0;
    for (Label l : labels)
        if (l == which) ++n;
    return n;
}

}  // namespace sybilframe
