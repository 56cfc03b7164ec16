#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace sybilframe {

using NodeId = std::uint32_t;
inline constexpr NodeId kInvalidNode = std::numeric_limits<NodeId>::max();

// Canonical undirected edge, endpoints ordered u < v.
struct Edge {
    NodeId u = 0;
    NodeId v = 0;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline Edge make_edge(NodeId a, NodeId b) { return a < b ? Edge{a, b} : Edge{b, a}; }

enum class Label : std::uint8_t { Benign, Sybil, Unknown };

// Per-node labels, indexed by dense node id.
using LabelMap = std::vector<Label>;

// Immutable simple graph in CSR form. Adjacency lists are sorted ascending;
// each adjacency slot also records the id of its undirected edge so per-edge
// values can be looked up in O(1) during message passing.
class UndirectedGraph {
public:
    UndirectedGraph() = default;

    // Self-loops and duplicate edges are dropped.
    static UndirectedGraph from_edges(NodeId node_count, std::vector<Edge> edges);

    NodeId node_count() const { return node_count_; }
    std::size_t edge_count() const { return edges_.size(); }

    std::span<const NodeId> neighbors(NodeId v) const {
        return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
    }
    std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
    bool has_edge(NodeId u, NodeId v) const;

    // Edges sorted ascending by (u, v); the position of an edge in this list
    // is its edge id.
    const std::vector<Edge>& edges() const { return edges_; }

    // Edge ids parallel to neighbors(v).
    std::span<const std::uint32_t> incident_edge_ids(NodeId v) const {
        return {edge_ids_.data() + offsets_[v], edge_ids_.data() + offsets_[v + 1]};
    }

    // Flattened views for kernels that index adjacency slots directly.
    std::size_t slot_begin(NodeId v) const { return offsets_[v]; }
    std::size_t slot_count() const { return adjacency_.size(); }
    std::span<const NodeId> adjacency() const { return adjacency_; }
    std::span<const std::uint32_t> slot_edge_ids() const { return edge_ids_; }

private:
    NodeId node_count_ = 0;
    std::vector<std::size_t> offsets_ = {0};
    std::vector<NodeId> adjacency_;
    std::vector<std::uint32_t> edge_ids_;
    std::vector<Edge> edges_;
};

// Immutable directed simple graph with both out- and in-adjacency in CSR form.
class DirectedGraph {
public:
    struct Arc {
        NodeId from = 0;
        NodeId to = 0;

        friend bool operator==(const Arc&, const Arc&) = default;
        friend auto operator<=>(const Arc&, const Arc&) = default;
    };

    DirectedGraph() = default;

    // Self-loops and duplicate arcs are dropped.
    static DirectedGraph from_arcs(NodeId node_count, std::vector<Arc> arcs);

    NodeId node_count() const { return node_count_; }
    std::size_t arc_count() const { return arc_count_; }

    std::span<const NodeId> out_neighbors(NodeId v) const {
        return {out_.data() + out_offsets_[v], out_.data() + out_offsets_[v + 1]};
    }
    std::span<const NodeId> in_neighbors(NodeId v) const {
        return {in_.data() + in_offsets_[v], in_.data() + in_offsets_[v + 1]};
    }
    bool has_arc(NodeId from, NodeId to) const;

private:
    NodeId node_count_ = 0;
    std::size_t arc_count_ = 0;
    std::vector<std::size_t> out_offsets_ = {0};
    std::vector<std::size_t> in_offsets_ = {0};
    std::vector<NodeId> out_;
    std::vector<NodeId> in_;
};

// Undirected edge (u, v) exists iff both arcs (u, v) and (v, u) exist.
UndirectedGraph mutualize(const DirectedGraph& g);

struct ComponentResult {
    UndirectedGraph graph;
    std::vector<NodeId> to_original;    // new id -> id in the input graph
    std::vector<NodeId> from_original;  // input id -> new id, kInvalidNode if dropped
};

// Induced subgraph on the largest connected component, ids re-contiguized in
// ascending order of the original ids. Ties between equal-sized components go
// to the one containing the smallest node id.
ComponentResult largest_connected_component(const UndirectedGraph& g);

// Number of common neighbors of u and v (sorted-list intersection).
std::size_t count_common_neighbors(const UndirectedGraph& g, NodeId u, NodeId v);

// 2 * |edges among neighbors of v| / (k * (k - 1)); 0 when degree(v) < 2.
double clustering_coefficient(const UndirectedGraph& g, NodeId v);

// Two-community Newman modularity of the benign/Sybil partition.
// Throws InputError on a zero-edge graph or an Unknown label.
double modularity(const UndirectedGraph& g, const LabelMap& partition);

std::size_t count_label(const LabelMap& labels, Label which);

}  // namespace sybilframe
