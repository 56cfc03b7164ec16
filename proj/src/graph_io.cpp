#include "sybilframe/graph_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "sybilframe/errors.hpp"

namespace sybilframe {

namespace {

struct RawEdgeList {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
    std::optional<std::uint64_t> declared_nodes;
    std::size_t self_loops = 0;
};

bool parse_u64(std::string_view token, std::uint64_t& out) {
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
    return ec == std::errc() && ptr == token.data() + token.size();
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) tokens.push_back(line.substr(start, i - start));
    }
    return tokens;
}

RawEdgeList read_raw_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open edge list: " + path);

    RawEdgeList raw;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.rfind("#nodes", 0) == 0) {
            auto tokens = split_ws(std::string_view(line).substr(6));
            std::uint64_t n = 0;
            if (tokens.size() != 1 || !parse_u64(tokens[0], n))
                throw ParseError("malformed #nodes header", line_no);
            raw.declared_nodes = n;
            continue;
        }
        if (line.empty() || line[0] == '#') continue;
        auto tokens = split_ws(line);
        if (tokens.empty()) continue;
        std::uint64_t a = 0, b = 0;
        if (tokens.size() != 2 || !parse_u64(tokens[0], a) || !parse_u64(tokens[1], b))
            throw ParseError("expected two non-negative integer ids", line_no);
        if (a == b) {
            ++raw.self_loops;
            continue;
        }
        raw.pairs.emplace_back(a, b);
    }
    return raw;
}

// With a #nodes header the file ids are used as-is (so isolated nodes can
// exist); otherwise ids are densified in order of first appearance.
IdRemap build_remap(const RawEdgeList& raw) {
    IdRemap remap;
    if (raw.declared_nodes) {
        const std::uint64_t n = *raw.declared_nodes;
        remap.identity = true;
        remap.to_original.resize(n);
        for (std::uint64_t i = 0; i < n; ++i) remap.to_original[i] = i;
        for (const auto& [a, b] : raw.pairs) {
            if (a >= n || b >= n)
                throw InputError("edge id exceeds the declared node count");
        }
        return remap;
    }
    remap.identity = false;
    for (const auto& [a, b] : raw.pairs) {
        for (std::uint64_t id : {a, b}) {
            if (remap.from_original.emplace(id, static_cast<NodeId>(remap.to_original.size())).second)
                remap.to_original.push_back(id);
        }
    }
    return remap;
}

NodeId dense_id(const IdRemap& remap, std::uint64_t original) {
    if (remap.identity) return static_cast<NodeId>(original);
    return remap.from_original.at(original);
}

}  // namespace

UndirectedLoadResult load_undirected_edge_list(const std::string& path) {
    RawEdgeList raw = read_raw_edge_list(path);
    UndirectedLoadResult result;
    result.remap = build_remap(raw);
    result.self_loops_skipped = raw.self_loops;
    std::vector<Edge> edges;
    edges.reserve(raw.pairs.size());
    for (const auto& [a, b] : raw.pairs)
        edges.push_back(make_edge(dense_id(result.remap, a), dense_id(result.remap, b)));
    result.graph = UndirectedGraph::from_edges(
        static_cast<NodeId>(result.remap.to_original.size()), std::move(edges));
    return result;
}

DirectedLoadResult load_directed_edge_list(const std::string& path) {
    RawEdgeList raw = read_raw_edge_list(path);
    DirectedLoadResult result;
    result.remap = build_remap(raw);
    result.self_loops_skipped = raw.self_loops;
    std::vector<DirectedGraph::Arc> arcs;
    arcs.reserve(raw.pairs.size());
    for (const auto& [a, b] : raw.pairs)
        arcs.push_back({dense_id(result.remap, a), dense_id(result.remap, b)});
    result.graph = DirectedGraph::from_arcs(static_cast<NodeId>(result.remap.to_original.size()),
                                            std::move(arcs));
    return result;
}

void save_edge_list(const UndirectedGraph& g, const std::string& path, const IdRemap* remap) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write edge list: " + path);
    out << "#nodes " << g.node_count() << "\n";
    for (const Edge& e : g.edges()) {
        if (remap && !remap->identity)
            out << remap->to_original[e.u] << " " << remap->to_original[e.v] << "\n";
        else
            out << e.u << " " << e.v << "\n";
    }
}

const char* label_name(Label label) {
    switch (label) {
        case Label::Benign: return "benign";
        case Label::Sybil: return "sybil";
        default: return "unknown";
    }
}

std::optional<Label> parse_label(const std::string& token) {
    if (token == "benign") return Label::Benign;
    if (token == "sybil") return Label::Sybil;
    if (token == "unknown") return Label::Unknown;
    return std::nullopt;
}

LabelMap load_labels(const std::string& path, NodeId node_count, const IdRemap* remap) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open label file: " + path);
    LabelMap labels(node_count, Label::Unknown);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::uint64_t id = 0;
        std::string token;
        if (!(ss >> id >> token)) throw ParseError("expected \"node_id label\"", line_no);
        auto label = parse_label(token);
        if (!label) throw ParseError("unknown label \"" + token + "\"", line_no);
        NodeId v;
        if (remap && !remap->identity) {
            auto it = remap->from_original.find(id);
            if (it == remap->from_original.end()) continue;  // label for a node absent from the graph
            v = it->second;
        } else {
            if (id >= node_count) throw ParseError("node id out of range", line_no);
            v = static_cast<NodeId>(id);
        }
        labels[v] = *label;
    }
    return labels;
}

void save_labels(const LabelMap& labels, const std::string& path, const IdRemap* remap) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write label file: " + path);
    for (NodeId v = 0; v < labels.size(); ++v) {
        if (remap && !remap->identity)
            out << remap->to_original[v] << " " << label_name(labels[v]) << "\n";
        else
            out << v << " " << label_name(labels[v]) << "\n";
    }
}

}  // namespace sybilframe
