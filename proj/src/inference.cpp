#include "sybilframe/inference.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#ifdef __linux__
#include <sys/mman.h>
#include <cstdlib>
#endif

#include "sybilframe/errors.hpp"

namespace sybilframe {

namespace {

// The round loop scatters 16 bytes per directed edge across the whole message
// buffer; with 4 KiB pages the TLB becomes the bottleneck well before memory
// bandwidth does. Ask for huge pages on the 2 MiB-aligned interior of the
// buffer before it is first touched.
void advise_huge_pages(void* data, std::size_t bytes) {
#ifdef __linux__
    constexpr std::uintptr_t kHuge = std::uintptr_t{2} << 20;
    const auto addr = reinterpret_cast<std::uintptr_t>(data);
    const std::uintptr_t lo = (addr + kHuge - 1) & ~(kHuge - 1);
    const std::uintptr_t hi = (addr + bytes) & ~(kHuge - 1);
    if (hi > lo) madvise(reinterpret_cast<void*>(lo), hi - lo, MADV_HUGEPAGE);
#else
    (void)data;
    (void)bytes;
#endif
}

template <typename T>
void reserve_huge(std::vector<T>& vec, std::size_t count) {
    vec.reserve(count);
    advise_huge_pages(vec.data(), count * sizeof(T));
}

// Lookahead for gathers through the mirror table. The index stream is
// sequential, so upcoming targets are known well before they are needed;
// prefetching them hides the latency the out-of-order window cannot.
constexpr std::size_t kGatherLookahead = 24;

}  // namespace

void PairwiseMRF::validate() const {
    if (!graph || !priors) throw ConfigError("MRF needs a graph and a prior assignment");
    if (iterations < 1) throw ConfigError("iteration cap must be >= 1");
    if (priors->node_prior.size() != graph->node_count())
        throw ConfigError("node priors do not cover every node");
    if (priors->edge_prior.size() != graph->edge_count())
        throw ConfigError("edge priors do not cover every edge");
    for (double p : priors->node_prior)
        if (!(p > 0.0 && p < 1.0)) throw ConfigError("node priors must lie strictly in (0, 1)");
    for (double p : priors->edge_prior)
        if (!(p > 0.0 && p < 1.0)) throw ConfigError("edge priors must lie strictly in (0, 1)");
}

double node_potential(double prior, int state) { return state == 1 ? prior : 1.0 - prior; }

double edge_potential(double prior, int state_u, int state_v) {
    return state_u == state_v ? prior : 1.0 - prior;
}

MessageState::MessageState(const UndirectedGraph& g) {
    const std::size_t slots = g.slot_count();
    reserve_huge(buffers_[0], slots);
    reserve_huge(buffers_[1], slots);
    buffers_[0].assign(slots, 0.5);
    buffers_[1].assign(slots, 0.5);
    reserve_huge(mirror_, slots);
    mirror_.resize(slots);
    // Replaying the canonical edge sweep that built the adjacency arrays
    // yields both slots of every edge in one linear pass.
    std::vector<std::uint32_t> cursor(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v)
        cursor[v] = static_cast<std::uint32_t>(g.slot_begin(v));
    for (const Edge& e : g.edges()) {
        const std::uint32_t su = cursor[e.u]++;
        const std::uint32_t sv = cursor[e.v]++;
        mirror_[su] = sv;
        mirror_[sv] = su;
    }
}

namespace {

using Pair = MessageState::Pair;

inline Pair normalized(double benign, double sybil) {
    const double total = benign + sybil;
    if (total == 0.0) return {0.5, 0.5};  // both sides underflowed; no information left
    return {benign / total, sybil / total};
}

// m_{u->v} from the exclusive product E over u's other incoming messages:
//   m(x_v) = sum_{x_u} psi_u(x_u) * psi_{u,v}(x_u, x_v) * E(x_u)
// Returns the normalized benign component; the Sybil one is its complement.
inline double apply_potentials(const Pair& e, double node_prior, double edge_prior) {
    const double support_benign = node_prior * e.benign;
    const double support_sybil = (1.0 - node_prior) * e.sybil;
    const double benign = edge_prior * support_benign + (1.0 - edge_prior) * support_sybil;
    const double sybil = (1.0 - edge_prior) * support_benign + edge_prior * support_sybil;
    const double total = benign + sybil;
    return total == 0.0 ? 0.5 : benign / total;
}

// Edge prior of each directed slot, gathered once so the round loop streams.
std::vector<double> slot_edge_priors(const UndirectedGraph& g, const PriorAssignment& priors) {
    auto ids = g.slot_edge_ids();
    std::vector<double> out;
    reserve_huge(out, ids.size());
    out.resize(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const std::size_t ahead = i + kGatherLookahead;
        if (ahead < ids.size()) __builtin_prefetch(&priors.edge_prior[ids[ahead]], 0, 1);
        out[i] = priors.edge_prior[ids[i]];
    }
    return out;
}

BeliefVector beliefs_from_messages(const UndirectedGraph& g, const PriorAssignment& priors,
                                   const MessageState& messages) {
    auto buffer = messages.active();
    auto mirror = messages.mirror_table();
    BeliefVector result;
    result.bel.resize(g.node_count());
#pragma omp parallel for schedule(dynamic, 256)
    for (std::int64_t v = 0; v < static_cast<std::int64_t>(g.node_count()); ++v) {
        const double p = priors.node_prior[v];
        Pair acc{p, 1.0 - p};
        const std::size_t begin = g.slot_begin(static_cast<NodeId>(v));
        const std::size_t end = begin + g.degree(static_cast<NodeId>(v));
        for (std::size_t i = begin; i < end; ++i) {
            const std::size_t ahead = i + kGatherLookahead;
            if (ahead < mirror.size()) __builtin_prefetch(&buffer[mirror[ahead]], 0, 1);
            const double m = buffer[mirror[i]];  // message into v
            acc = normalized(acc.benign * m, acc.sybil * (1.0 - m));
        }
        result.bel[v] = acc.benign;
    }
    return result;
}

double run_rounds_linear(const UndirectedGraph& g, const PriorAssignment& priors,
                         MessageState& messages, const std::vector<double>& slot_prior,
                         int rounds, double residual_tol, int* executed) {
    const std::int64_t n = g.node_count();
    auto mirror = messages.mirror_table();

    double residual = 0.0;
    int round = 0;
    for (; round < rounds; ++round) {
        auto previous = messages.active();
        auto next = messages.next();
        const bool track = residual_tol > 0.0 || round + 1 == rounds;
        double round_residual = 0.0;
#pragma omp parallel
        {
            std::vector<double> incoming;
            std::vector<Pair> prefix, suffix;
            double local_residual = 0.0;
#pragma omp for schedule(dynamic, 64) nowait
            for (std::int64_t v = 0; v < n; ++v) {
                const std::size_t begin = g.slot_begin(static_cast<NodeId>(v));
                const std::size_t deg = g.degree(static_cast<NodeId>(v));
                if (deg == 0) continue;
                const double node_prior = priors.node_prior[v];

                // Gather the incoming messages first: the scattered loads are
                // independent and overlap, and everything after runs over
                // thread-local memory.
                incoming.resize(deg);
                for (std::size_t i = 0; i < deg; ++i) {
                    const std::size_t ahead = begin + i + kGatherLookahead;
                    if (ahead < mirror.size()) __builtin_prefetch(&previous[mirror[ahead]], 0, 1);
                    incoming[i] = previous[mirror[begin + i]];
                }

                // Exclusive products of the incoming messages via normalized
                // prefix/suffix passes; the shared normalization constants
                // cancel when the outgoing message is normalized.
                prefix.assign(deg + 1, Pair{1.0, 1.0});
                suffix.assign(deg + 1, Pair{1.0, 1.0});
                for (std::size_t i = 0; i < deg; ++i) {
                    prefix[i + 1] = normalized(prefix[i].benign * incoming[i],
                                               prefix[i].sybil * (1.0 - incoming[i]));
                }
                for (std::size_t i = deg; i > 0; --i) {
                    suffix[i - 1] = normalized(suffix[i].benign * incoming[i - 1],
                                               suffix[i].sybil * (1.0 - incoming[i - 1]));
                }
                for (std::size_t i = 0; i < deg; ++i) {
                    const Pair exclusive = {prefix[i].benign * suffix[i + 1].benign,
                                            prefix[i].sybil * suffix[i + 1].sybil};
                    const double out =
                        apply_potentials(exclusive, node_prior, slot_prior[begin + i]);
                    if (track)
                        local_residual =
                            std::max(local_residual, std::abs(out - previous[begin + i]));
                    next[begin + i] = out;
                }
            }
            if (track) {
#pragma omp critical
                round_residual = std::max(round_residual, local_residual);
            }
        }
        messages.flip();
        residual = round_residual;
        if (residual_tol > 0.0 && residual < residual_tol) {
            ++round;
            break;
        }
    }
    if (executed) *executed = round;
    return residual;
}

// Log-space variant for graphs whose degrees would underflow even normalized
// products. Messages are stored as log-probability pairs in local buffers
// (both components, since the complement is not cheap in log space); the
// exclusive product becomes a sum, computed as total minus own term.
std::vector<Pair> run_rounds_log(const UndirectedGraph& g, const PriorAssignment& priors,
                                 const MessageState& messages,
                                 const std::vector<double>& slot_prior, int rounds,
                                 double residual_tol, int* executed, double* last_residual) {
    const std::int64_t n = g.node_count();
    std::vector<Pair> buffers[2];
    buffers[0].assign(g.slot_count(), Pair{std::log(0.5), std::log(0.5)});
    buffers[1] = buffers[0];
    int active = 0;
    auto mirror = messages.mirror_table();

    double residual = 0.0;
    int round = 0;
    for (; round < rounds; ++round) {
        std::span<const Pair> previous = buffers[active];
        std::span<Pair> next = buffers[1 - active];
        const bool track = residual_tol > 0.0 || round + 1 == rounds;
        double round_residual = 0.0;
#pragma omp parallel
        {
            std::vector<Pair> incoming;
            double local_residual = 0.0;
#pragma omp for schedule(dynamic, 64) nowait
            for (std::int64_t v = 0; v < n; ++v) {
                const std::size_t begin = g.slot_begin(static_cast<NodeId>(v));
                const std::size_t deg = g.degree(static_cast<NodeId>(v));
                if (deg == 0) continue;
                const double node_prior = priors.node_prior[v];
                incoming.resize(deg);
                double total_benign = 0.0, total_sybil = 0.0;
                for (std::size_t i = 0; i < deg; ++i) {
                    incoming[i] = previous[mirror[begin + i]];
                    total_benign += incoming[i].benign;
                    total_sybil += incoming[i].sybil;
                }
                for (std::size_t i = 0; i < deg; ++i) {
                    const double log_eb = total_benign - incoming[i].benign;
                    const double log_es = total_sybil - incoming[i].sybil;
                    const double pe = slot_prior[begin + i];
                    const double lb = std::log(node_prior) + log_eb;
                    const double ls = std::log(1.0 - node_prior) + log_es;
                    auto log_sum = [](double a, double b) {
                        const double hi = std::max(a, b);
                        return hi + std::log1p(std::exp(std::min(a, b) - hi));
                    };
                    double out_b = log_sum(std::log(pe) + lb, std::log1p(-pe) + ls);
                    double out_s = log_sum(std::log1p(-pe) + lb, std::log(pe) + ls);
                    const double norm = log_sum(out_b, out_s);
                    out_b -= norm;
                    out_s -= norm;
                    if (track)
                        local_residual =
                            std::max(local_residual,
                                     std::abs(std::exp(out_b) - std::exp(previous[begin + i].benign)));
                    next[begin + i] = {out_b, out_s};
                }
            }
            if (track) {
#pragma omp critical
                round_residual = std::max(round_residual, local_residual);
            }
        }
        active = 1 - active;
        residual = round_residual;
        if (residual_tol > 0.0 && residual < residual_tol) {
            ++round;
            break;
        }
    }
    if (executed) *executed = round;
    if (last_residual) *last_residual = residual;
    return std::move(buffers[active]);
}

BeliefVector beliefs_from_log_messages(const UndirectedGraph& g, const PriorAssignment& priors,
                                       std::span<const Pair> buffer,
                                       std::span<const std::uint32_t> mirror) {
    BeliefVector result;
    result.bel.resize(g.node_count());
#pragma omp parallel for schedule(dynamic, 256)
    for (std::int64_t v = 0; v < static_cast<std::int64_t>(g.node_count()); ++v) {
        const double p = priors.node_prior[v];
        double lb = std::log(p), ls = std::log(1.0 - p);
        const std::size_t begin = g.slot_begin(static_cast<NodeId>(v));
        const std::size_t end = begin + g.degree(static_cast<NodeId>(v));
        for (std::size_t i = begin; i < end; ++i) {
            lb += buffer[mirror[i]].benign;
            ls += buffer[mirror[i]].sybil;
        }
        const double hi = std::max(lb, ls);
        result.bel[v] = std::exp(lb - hi) / (std::exp(lb - hi) + std::exp(ls - hi));
    }
    return result;
}

}  // namespace

BeliefVector run_lbp(const PairwiseMRF& mrf, const LbpOptions& options) {
    mrf.validate();
    const UndirectedGraph& g = *mrf.graph;
    const PriorAssignment& priors = *mrf.priors;

    MessageState messages(g);
    const std::vector<double> slot_prior = slot_edge_priors(g, priors);

    int rounds = 0;
    if (options.log_domain) {
        double residual = 0.0;
        std::vector<Pair> final_inbox =
            run_rounds_log(g, priors, messages, slot_prior, mrf.iterations,
                           options.residual_tolerance, &rounds, &residual);
        if (options.stats) {
            options.stats->rounds = rounds;
            options.stats->last_residual = residual;
        }
        return beliefs_from_log_messages(g, priors, final_inbox, messages.mirror_table());
    }

    const double residual = run_rounds_linear(g, priors, messages, slot_prior, mrf.iterations,
                                              options.residual_tolerance, &rounds);
    if (options.stats) {
        options.stats->rounds = rounds;
        options.stats->last_residual = residual;
    }
    return beliefs_from_messages(g, priors, messages);
}

BeliefVector run_lbp_reference(const PairwiseMRF& mrf, const LbpOptions& options) {
    mrf.validate();
    const UndirectedGraph& g = *mrf.graph;
    const PriorAssignment& priors = *mrf.priors;

    MessageState messages(g);
    const std::vector<double> slot_prior = slot_edge_priors(g, priors);

    int round = 0;
    double residual = 0.0;
    for (; round < mrf.iterations; ++round) {
        auto previous = messages.active();
        auto next = messages.next();
        residual = 0.0;
        for (NodeId v = 0; v < g.node_count(); ++v) {
            const std::size_t begin = g.slot_begin(v);
            const std::size_t deg = g.degree(v);
            const double node_prior = priors.node_prior[v];
            for (std::size_t i = 0; i < deg; ++i) {
                // Direct exclusive product over the other incoming messages.
                Pair exclusive{1.0, 1.0};
                for (std::size_t j = 0; j < deg; ++j) {
                    if (j == i) continue;
                    const double m = previous[messages.mirror(begin + j)];
                    exclusive = normalized(exclusive.benign * m, exclusive.sybil * (1.0 - m));
                }
                const double out = apply_potentials(exclusive, node_prior, slot_prior[begin + i]);
                residual = std::max(residual, std::abs(out - previous[begin + i]));
                next[begin + i] = out;
            }
        }
        messages.flip();
        if (options.residual_tolerance > 0.0 && residual < options.residual_tolerance) {
            ++round;
            break;
        }
    }
    if (options.stats) {
        options.stats->rounds = round;
        options.stats->last_residual = residual;
    }

    BeliefVector result;
    result.bel.resize(g.node_count());
    auto buffer = messages.active();
    for (NodeId v = 0; v < g.node_count(); ++v) {
        const double p = priors.node_prior[v];
        Pair acc{p, 1.0 - p};
        const std::size_t begin = g.slot_begin(v);
        for (std::size_t i = 0; i < g.degree(v); ++i) {
            const double m = buffer[messages.mirror(begin + i)];
            acc = normalized(acc.benign * m, acc.sybil * (1.0 - m));
        }
        result.bel[v] = acc.benign;
    }
    return result;
}

LabelMap classify(const BeliefVector& beliefs) {
    LabelMap labels(beliefs.size(), Label::Benign);
    for (std::size_t v = 0; v < beliefs.size(); ++v)
        labels[v] = beliefs.bel[v] >= 0.5 ? Label::Benign : Label::Sybil;
    return labels;
}

std::vector<NodeId> rank(const BeliefVector& beliefs) {
    std::vector<NodeId> order(beliefs.size());
    std::iota(order.begin(), order.end(), NodeId{0});
    std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        if (beliefs.bel[a] != beliefs.bel[b]) return beliefs.bel[a] < beliefs.bel[b];
        return a < b;
    });
    return order;
}

void save_beliefs(const BeliefVector& beliefs, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write beliefs: " + path);
    out.precision(17);
    for (std::size_t v = 0; v < beliefs.size(); ++v) out << v << " " << beliefs.bel[v] << "\n";
}

BeliefVector load_beliefs(const std::string& path, NodeId node_count) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open beliefs: " + path);
    BeliefVector beliefs;
    beliefs.bel.assign(node_count, 0.5);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::uint64_t v = 0;
        double b = 0.0;
        if (!(ss >> v >> b) || v >= node_count) throw ParseError("expected \"node_id belief\"", line_no);
        beliefs.bel[v] = b;
    }
    return beliefs;
}

void save_ranking_csv(const std::vector<NodeId>& ranking, const BeliefVector& beliefs,
                      const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write ranking: " + path);
    out.precision(17);
    out << "rank,node_id,belief\n";
    for (std::size_t i = 0; i < ranking.size(); ++i)
        out << i << "," << ranking[i] << "," << beliefs.bel[ranking[i]] << "\n";
}

}  // namespace sybilframe
