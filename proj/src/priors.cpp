#include "sybilframe/priors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "sybilframe/errors.hpp"

namespace sybilframe {

double clamp_prior(double p) { return std::clamp(p, kPriorClamp, 1.0 - kPriorClamp); }

void NoiseModel::validate() const {
    if (!(fpr >= 0.0 && fpr <= 0.5) || !(fnr >= 0.0 && fnr <= 0.5))
        throw ConfigError("noise rates must lie in [0, 0.5]");
}

std::vector<double> synth_node_priors(const LabelMap& truth,
                                      const std::vector<NodeId>& benign_seeds,
                                      const std::vector<NodeId>& sybil_seeds,
                                      const NoiseModel& noise, Rng& rng) {
    noise.validate();
    std::vector<double> priors(truth.size(), 0.5);
    for (NodeId v = 0; v < truth.size(); ++v) {
        const double coin = rng.uniform01();
        const bool wrong_side =
            truth[v] == Label::Benign ? coin < noise.fpr : coin < noise.fnr;
        const bool benign_range = (truth[v] == Label::Benign) != wrong_side;
        priors[v] = benign_range ? rng.uniform(0.5, 0.9) : rng.uniform(0.1, 0.5);
    }
    // Seeds are pinned after the loop so every node consumes the same number
    // of draws; seed placement then never shifts the other nodes' priors.
    for (NodeId v : benign_seeds) priors[v] = 0.9;
    for (NodeId v : sybil_seeds) priors[v] = 0.1;
    for (double& p : priors) p = clamp_prior(p);
    return priors;
}

std::vector<double> synth_edge_priors(const UndirectedGraph& graph, const LabelMap& truth,
                                      const std::vector<NodeId>& benign_seeds,
                                      const std::vector<NodeId>& sybil_seeds,
                                      const NoiseModel& noise, Rng& rng) {
    noise.validate();
    std::vector<char> is_seed(truth.size(), 0);
    for (NodeId v : benign_seeds) is_seed[v] = 1;
    for (NodeId v : sybil_seeds) is_seed[v] = 1;

    std::vector<double> priors(graph.edge_count(), 0.9);
    for (std::size_t id = 0; id < graph.edges().size(); ++id) {
        const Edge& e = graph.edges()[id];
        const bool differ = truth[e.u] != truth[e.v];
        const double coin = rng.uniform01();
        const bool same_range = differ ? coin < noise.fnr : coin >= noise.fpr;
        priors[id] = same_range ? rng.uniform(0.5, 0.9) : rng.uniform(0.1, 0.5);
        if (is_seed[e.u] && is_seed[e.v]) priors[id] = differ ? 0.1 : 0.9;
    }
    for (double& p : priors) p = clamp_prior(p);
    return priors;
}

namespace {

std::size_t sorted_intersection_size(std::span<const NodeId> a, std::span<const NodeId> b) {
    std::size_t count = 0, i = 0, j = 0;
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

}  // namespace

NodeFeatureVector node_features(const DirectedGraph& directed, const UndirectedGraph& undirected,
                                NodeId v) {
    NodeFeatureVector f;
    auto in = directed.in_neighbors(v);
    auto out = directed.out_neighbors(v);
    const double mutual = static_cast<double>(sorted_intersection_size(in, out));
    f.req_in = in.empty() ? 0.0 : mutual / static_cast<double>(in.size());
    f.req_out = out.empty() ? 0.0 : mutual / static_cast<double>(out.size());
    f.clustering = clustering_coefficient(undirected, v);
    return f;
}

std::vector<NodeFeatureVector> node_feature_matrix(const DirectedGraph& directed,
                                                   const UndirectedGraph& undirected,
                                                   const std::vector<NodeId>& to_directed) {
    std::vector<NodeFeatureVector> features(undirected.node_count());
#pragma omp parallel for schedule(dynamic, 256)
    for (std::int64_t v = 0; v < static_cast<std::int64_t>(undirected.node_count()); ++v) {
        NodeId d = to_directed[v];
        NodeFeatureVector f;
        if (d != kInvalidNode) {
            auto in = directed.in_neighbors(d);
            auto out = directed.out_neighbors(d);
            const double mutual = static_cast<double>(sorted_intersection_size(in, out));
            f.req_in = in.empty() ? 0.0 : mutual / static_cast<double>(in.size());
            f.req_out = out.empty() ? 0.0 : mutual / static_cast<double>(out.size());
        }
        f.clustering = clustering_coefficient(undirected, static_cast<NodeId>(v));
        features[v] = f;
    }
    return features;
}

EdgeFeatureVector edge_features(const UndirectedGraph& g, NodeId u, NodeId v,
                                bool use_log_degrees) {
    EdgeFeatureVector f;
    auto a = g.neighbors(u);
    auto b = g.neighbors(v);
    const double ku = static_cast<double>(a.size());
    const double kv = static_cast<double>(b.size());

    std::size_t common = 0;
    double adamic = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j])
            ++i;
        else if (a[i] > b[j])
            ++j;
        else {
            ++common;
            const double ks = static_cast<double>(g.degree(a[i]));
            adamic += use_log_degrees ? 1.0 / std::log(ks) : 1.0 / ks;
            ++i;
            ++j;
        }
    }
    f.common_neighbors = static_cast<double>(common);
    if (common > 0) {
        f.cosine = f.common_neighbors / std::sqrt(ku * kv);
        f.jaccard = f.common_neighbors / (ku + kv - f.common_neighbors);
        f.adamic_adar = adamic;
    }
    return f;
}

double jaccard_index(const UndirectedGraph& g, NodeId u, NodeId v) {
    auto a = g.neighbors(u);
    auto b = g.neighbors(v);
    const std::size_t common = sorted_intersection_size(a, b);
    const std::size_t uni = a.size() + b.size() - common;
    return uni == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(uni);
}

std::vector<double> jaccard_edge_priors(const UndirectedGraph& g,
                                        const std::vector<NodeId>& benign_seeds,
                                        const std::vector<NodeId>& sybil_seeds) {
    std::vector<char> seed_side(g.node_count(), 0);  // 0 none, 1 benign, 2 sybil
    for (NodeId v : benign_seeds) seed_side[v] = 1;
    for (NodeId v : sybil_seeds) seed_side[v] = 2;

    const std::size_t m = g.edge_count();
    std::vector<double> index(m, 0.0);
    std::vector<char> pinned(m, 0);

#pragma omp parallel for schedule(dynamic, 512)
    for (std::int64_t id = 0; id < static_cast<std::int64_t>(m); ++id) {
        const Edge& e = g.edges()[id];
        if (seed_side[e.u] != 0 && seed_side[e.v] != 0) {
            pinned[id] = 1;
            index[id] = seed_side[e.u] == seed_side[e.v] ? 0.9 : 0.1;
        } else {
            index[id] = jaccard_index(g, e.u, e.v);
        }
    }

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t id = 0; id < m; ++id) {
        if (pinned[id]) continue;
        lo = std::min(lo, index[id]);
        hi = std::max(hi, index[id]);
    }

    std::vector<double> priors(m, 0.5);
    for (std::size_t id = 0; id < m; ++id) {
        if (pinned[id]) {
            priors[id] = index[id];
        } else if (hi > lo) {
            priors[id] = 0.1 + 0.8 * (index[id] - lo) / (hi - lo);
        }  // degenerate observed range: keep the uninformative midpoint
        priors[id] = clamp_prior(priors[id]);
    }
    return priors;
}

std::vector<double> node_priors_to_edge_priors(const std::vector<double>& node_prior,
                                               const UndirectedGraph& g) {
    std::vector<double> priors(g.edge_count());
    for (std::size_t id = 0; id < g.edges().size(); ++id) {
        const Edge& e = g.edges()[id];
        const bool benign_u = node_prior[e.u] >= 0.5;
        const bool benign_v = node_prior[e.v] >= 0.5;
        priors[id] = benign_u == benign_v ? 0.9 : 0.1;
    }
    return priors;
}

void save_node_priors(const std::vector<double>& priors, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write node priors: " + path);
    out.precision(17);
    for (std::size_t v = 0; v < priors.size(); ++v) out << v << " " << priors[v] << "\n";
}

std::vector<double> load_node_priors(const std::string& path, NodeId node_count) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open node priors: " + path);
    std::vector<double> priors(node_count, 0.5);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::uint64_t v = 0;
        double p = 0.0;
        if (!(ss >> v >> p) || v >= node_count || !(p >= 0.0 && p <= 1.0))
            throw ParseError("expected \"node_id prior\"", line_no);
        priors[v] = p;
    }
    return priors;
}

void save_edge_priors(const UndirectedGraph& g, const std::vector<double>& priors,
                      const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write edge priors: " + path);
    out.precision(17);
    for (std::size_t id = 0; id < g.edges().size(); ++id)
        out << g.edges()[id].u << " " << g.edges()[id].v << " " << priors[id] << "\n";
}

std::vector<double> load_edge_priors(const UndirectedGraph& g, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open edge priors: " + path);
    std::vector<double> priors(g.edge_count(), 0.9);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        NodeId u = 0, v = 0;
        double p = 0.0;
        if (!(ss >> u >> v >> p) || !(p >= 0.0 && p <= 1.0))
            throw ParseError("expected \"u v prior\"", line_no);
        const Edge e = make_edge(u, v);
        auto it = std::lower_bound(g.edges().begin(), g.edges().end(), e);
        if (it == g.edges().end() || *it != e) throw ParseError("prior for a non-edge", line_no);
        priors[static_cast<std::size_t>(it - g.edges().begin())] = p;
    }
    return priors;
}

void save_node_features_csv(const std::vector<NodeFeatureVector>& features,
                            const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write feature csv: " + path);
    out.precision(17);
    out << "node_id,req_in,req_out,clustering\n";
    for (std::size_t v = 0; v < features.size(); ++v)
        out << v << "," << features[v].req_in << "," << features[v].req_out << ","
            << features[v].clustering << "\n";
}

}  // namespace sybilframe
