#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "sybilframe/graph.hpp"

namespace sybilframe {

// Mapping between the ids used in an input file and the dense internal ids.
struct IdRemap {
    std::vector<std::uint64_t> to_original;  // dense id -> file id
    std::unordered_map<std::uint64_t, NodeId> from_original;

    bool identity = true;  // file already used 0..n-1
};

struct UndirectedLoadResult {
    UndirectedGraph graph;
    IdRemap remap;
    std::size_t self_loops_skipped = 0;
};

struct DirectedLoadResult {
    DirectedGraph graph;
    IdRemap remap;
    std::size_t self_loops_skipped = 0;
};

// Edge-list text format: one "u v" pair of non-negative integer ids per line.
// Lines starting with '#' are comments, except an optional "#nodes N" header
// which fixes the node count (ids must then already be 0..N-1, covering
// isolated nodes). Without the header, ids are remapped to a dense range in
// order of first appearance. Self-loops are skipped and counted; duplicate
// edges are dropped. Malformed lines raise ParseError with the line number.
UndirectedLoadResult load_undirected_edge_list(const std::string& path);
DirectedLoadResult load_directed_edge_list(const std::string& path);

// Writes "#nodes N" followed by one edge per line, using original ids when a
// remap is given.
void save_edge_list(const UndirectedGraph& g, const std::string& path,
                    const IdRemap* remap = nullptr);

// Label file: "node_id label" per line, label in {benign, sybil, unknown}.
// Nodes absent from the file default to Unknown.
LabelMap load_labels(const std::string& path, NodeId node_count, const IdRemap* remap = nullptr);
void save_labels(const LabelMap& labels, const std::string& path, const IdRemap* remap = nullptr);

const char* label_name(Label label);
std::optional<Label> parse_label(const std::string& token);

}  // namespace sybilframe
