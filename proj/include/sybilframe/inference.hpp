#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sybilframe/graph.hpp"
#include "sybilframe/priors.hpp"

namespace sybilframe {

// Binary pairwise Markov random field over a graph: one node potential per
// node (probability of the benign state) and one edge potential per edge
// (probability that the endpoints agree).
struct PairwiseMRF {
    const UndirectedGraph* graph = nullptr;
    const PriorAssignment* priors = nullptr;
    int iterations = 6;

    void validate() const;  // throws ConfigError on missing coverage or d < 1
};

// Node potential: prior for the benign state (+1), complement for Sybil (-1).
double node_potential(double prior, int state);

// Edge potential: prior when the states agree, complement when they differ.
double edge_potential(double prior, int state_u, int state_v);

// One message per directed adjacency slot over the binary state domain,
// stored at the sender (slot p in u's adjacency holds the message FROM u to
// neighbors(u)[p]; the reverse direction sits at mirror(p)). Each pair is
// kept normalized to sum 1 with both entries strictly positive, so only the
// benign component is materialized; the Sybil component is its complement.
// Double-buffered so a full round reads only the previous round.
class MessageState {
public:
    struct Pair {
        double benign = 0.5;
        double sybil = 0.5;
    };

    explicit MessageState(const UndirectedGraph& g);

    // Benign components, indexed by receiver slot.
    std::span<double> active() { return buffers_[active_]; }
    std::span<const double> active() const { return buffers_[active_]; }
    std::span<double> next() { return buffers_[1 - active_]; }
    void flip() { active_ = 1 - active_; }

    Pair pair(std::size_t slot) const {
        const double b = buffers_[active_][slot];
        return {b, 1.0 - b};
    }

    // Slot of the reverse direction: mirror of (u -> v) stored at v is the
    // slot of (v -> u) stored at u.
    std::uint32_t mirror(std::size_t slot) const { return mirror_[slot]; }
    std::span<const std::uint32_t> mirror_table() const { return mirror_; }

private:
    std::vector<double> buffers_[2];
    std::vector<std::uint32_t> mirror_;
    int active_ = 0;
};

// Per-node posterior probability of the benign state.
struct BeliefVector {
    std::vector<double> bel;

    double operator[](NodeId v) const { return bel[v]; }
    std::size_t size() const { return bel.size(); }
};

struct LbpStats {
    int rounds = 0;
    double last_residual = 0.0;  // max |message delta| of the final round
};

struct LbpOptions {
    // Residual-based early stop for diagnostics; 0 keeps the fixed-round
    // schedule, which is the reference behavior.
    double residual_tolerance = 0.0;
    bool log_domain = false;  // evaluate message products in log space
    LbpStats* stats = nullptr;
};

// Synchronous loopy belief propagation: mrf.iterations full rounds of
// simultaneous message updates from the previous round's buffer, then one
// belief pass. Messages are renormalized after every update. Results are
// bit-identical for a fixed input regardless of thread count.
BeliefVector run_lbp(const PairwiseMRF& mrf, const LbpOptions& options = {});

// Single-threaded reference with the textbook per-message product; kept as
// the correctness baseline for the optimized kernel.
BeliefVector run_lbp_reference(const PairwiseMRF& mrf, const LbpOptions& options = {});

// Benign iff belief >= 0.5: the tie favors not flagging a node.
LabelMap classify(const BeliefVector& beliefs);

// Node ids in ascending belief order (suspicious first); ties by ascending id.
std::vector<NodeId> rank(const BeliefVector& beliefs);

// "node_id belief" per line.
void save_beliefs(const BeliefVector& beliefs, const std::string& path);
BeliefVector load_beliefs(const std::string& path, NodeId node_count);

// CSV with header rank,node_id,belief.
void save_ranking_csv(const std::vector<NodeId>& ranking, const BeliefVector& beliefs,
                      const std::string& path);

}  // namespace sybilframe
