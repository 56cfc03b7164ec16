#include "sybilframe/experiment.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sybilframe/baselines.hpp"
#include "sybilframe/errors.hpp"
#include "sybilframe/graph_io.hpp"
#include "sybilframe/inference.hpp"

namespace sybilframe {

namespace {

// Substream tags; combined with the master seed, the sweep value and the run
// index so per-run randomness is independent of scheduling and sweep order.
constexpr std::uint64_t kGraphStream = 1;
constexpr std::uint64_t kSeedStream = 2;
constexpr std::uint64_t kPriorStream = 3;
constexpr std::uint64_t kTrainStream = 4;

std::uint64_t value_bits(double x) { return std::bit_cast<std::uint64_t>(x); }

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

ConfigMap ConfigMap::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config file: " + path);
    ConfigMap map;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw ParseError("unterminated section header", line_no);
            continue;  // sections are organizational only
        }
        std::size_t split = t.find_first_of(" \t=");
        if (split == std::string::npos) throw ParseError("expected \"key value\"", line_no);
        std::string key = trim(t.substr(0, split));
        std::string value = trim(t.substr(split + 1));
        if (!value.empty() && value.front() == '=') value = trim(value.substr(1));
        if (key.empty() || value.empty()) throw ParseError("expected \"key value\"", line_no);
        map.values_[key] = value;
    }
    return map;
}

std::string ConfigMap::get_string(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

std::int64_t ConfigMap::get_int(const std::string& key, std::int64_t fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::int64_t out = 0;
    auto [ptr, ec] = std::from_chars(it->second.data(), it->second.data() + it->second.size(), out);
    if (ec != std::errc() || ptr != it->second.data() + it->second.size())
        throw ConfigError("config key '" + key + "' expects an integer, got '" + it->second + "'");
    return out;
}

std::uint64_t ConfigMap::get_u64(const std::string& key, std::uint64_t fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(it->second.data(), it->second.data() + it->second.size(), out);
    if (ec != std::errc() || ptr != it->second.data() + it->second.size())
        throw ConfigError("config key '" + key + "' expects a non-negative integer");
    return out;
}

double ConfigMap::get_double(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        std::size_t pos = 0;
        double out = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
        return out;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "' expects a number, got '" + it->second + "'");
    }
}

bool ConfigMap::get_bool(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second == "true" || it->second == "1" || it->second == "yes") return true;
    if (it->second == "false" || it->second == "0" || it->second == "no") return false;
    throw ConfigError("config key '" + key + "' expects a boolean");
}

std::vector<double> ConfigMap::get_double_list(const std::string& key,
                                               const std::vector<double>& fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::vector<double> out;
    std::stringstream ss(it->second);
    std::string token;
    while (std::getline(ss, token, ',')) {
        token = trim(token);
        if (token.empty()) continue;
        try {
            out.push_back(std::stod(token));
        } catch (const std::exception&) {
            throw ConfigError("config key '" + key + "' expects a comma-separated number list");
        }
    }
    if (out.empty()) throw ConfigError("config key '" + key + "' has an empty list");
    return out;
}

std::string ConfigMap::canonical() const {
    std::string out;
    for (const auto& [k, v] : values_) {
        out += k;
        out += ' ';
        out += v;
        out += '\n';
    }
    return out;
}

std::uint64_t config_hash(const ConfigMap& config) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : config.canonical()) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

const char* experiment_kind_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::SynthNodePrior: return "synth-node-prior";
        case ExperimentKind::SynthEdgePrior: return "synth-edge-prior";
        case ExperimentKind::SeedTargeting: return "seed-targeting";
        case ExperimentKind::FacebookStyle: return "facebook-style";
        case ExperimentKind::FeaturePipeline: return "feature-pipeline";
        default: return "baseline-compare";
    }
}

namespace {

ExperimentKind parse_kind(const std::string& name) {
    for (ExperimentKind k :
         {ExperimentKind::SynthNodePrior, ExperimentKind::SynthEdgePrior,
          ExperimentKind::SeedTargeting, ExperimentKind::FacebookStyle,
          ExperimentKind::FeaturePipeline, ExperimentKind::BaselineCompare}) {
        if (name == experiment_kind_name(k)) return k;
    }
    throw ConfigError("unknown experiment kind '" + name + "'");
}

SweepVariable parse_sweep(const std::string& name) {
    if (name == "fpr-fnr") return SweepVariable::NoiseBoth;
    if (name == "fnr") return SweepVariable::NoiseFnr;
    if (name == "attack-edges") return SweepVariable::AttackEdges;
    if (name == "sybil-size") return SweepVariable::SybilSize;
    throw ConfigError("unknown sweep variable '" + name + "'");
}

SeedScenario parse_scenario(const std::string& name) {
    if (name == "uniform") return SeedScenario::Uniform;
    if (name == "si") return SeedScenario::Avoided;
    if (name == "sii") return SeedScenario::Targeted;
    throw ConfigError("unknown seed scenario '" + name + "'");
}

std::vector<double> default_sweep_values(ExperimentKind kind, SweepVariable sweep) {
    if (kind == ExperimentKind::FacebookStyle) return {1000, 5000, 10000, 15000, 20000};
    if (kind == ExperimentKind::SeedTargeting) return {200, 400, 600, 800, 1000};
    switch (sweep) {
        case SweepVariable::NoiseBoth:
        case SweepVariable::NoiseFnr: return {0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
        case SweepVariable::AttackEdges: return {0, 200, 400, 600, 800, 1000};
        default: return {400, 500, 600, 700, 800, 900, 1000};
    }
}

}  // namespace

ExperimentConfig parse_experiment_config(const ConfigMap& map) {
    ExperimentConfig cfg;
    cfg.kind = parse_kind(map.get_string("kind", "synth-node-prior"));
    if (cfg.kind == ExperimentKind::SeedTargeting || cfg.kind == ExperimentKind::FacebookStyle)
        cfg.sweep = SweepVariable::AttackEdges;
    if (map.has("sweep")) cfg.sweep = parse_sweep(map.get_string("sweep", ""));
    cfg.sweep_values = map.get_double_list("sweep-values", default_sweep_values(cfg.kind, cfg.sweep));
    cfg.runs = static_cast<int>(map.get_int("runs", 100));
    cfg.master_seed = map.get_u64("seed", 0);
    cfg.lbp_iterations = static_cast<int>(map.get_int("lbp-iters", 6));
    cfg.out_dir = map.get_string("out-dir", "");
    cfg.benign_size = static_cast<NodeId>(map.get_int("benign-size", 1000));
    cfg.sybil_size = static_cast<NodeId>(map.get_int("sybil-size", 400));
    cfg.avg_degree = static_cast<std::size_t>(map.get_int("avg-degree", 10));
    cfg.attack_edges = static_cast<std::size_t>(map.get_int("attack-edges", 1000));
    cfg.benign_seed_count = static_cast<std::size_t>(map.get_int("benign-seeds", 1));
    cfg.sybil_seed_count = static_cast<std::size_t>(map.get_int("sybil-seeds", 1));
    cfg.benign_scenario = parse_scenario(map.get_string("benign-scenario", "uniform"));
    cfg.sybil_scenario = parse_scenario(map.get_string("sybil-scenario", "uniform"));
    cfg.node_noise = {map.get_double("node-fpr", 0.0), map.get_double("node-fnr", 0.0)};
    cfg.edge_noise = {map.get_double("edge-fpr", 0.0), map.get_double("edge-fnr", 0.0)};
    cfg.edge_prior_experiment = map.get_string("prior-source", "node") == "edge";
    cfg.graph_path = map.get_string("graph", "");
    cfg.labels_path = map.get_string("labels", "");
    cfg.train_per_class = static_cast<std::size_t>(map.get_int("train-per-class", 10000));
    cfg.class_weights = {map.get_double("benign-weight", 1.0), map.get_double("sybil-weight", 1.0)};
    cfg.l2 = map.get_double("l2", 1e-4);
    for (double k : map.get_double_list("topk", {}))
        cfg.topk.push_back(static_cast<std::size_t>(k));
    cfg.export_instances = map.get_bool("export-instances", false);
    cfg.validate();
    return cfg;
}

void ExperimentConfig::validate() const {
    if (runs < 1) throw ConfigError("runs must be >= 1");
    if (lbp_iterations < 1) throw ConfigError("lbp-iters must be >= 1");
    if (sweep_values.empty() && kind != ExperimentKind::FeaturePipeline)
        throw ConfigError("sweep-values must be non-empty");
    node_noise.validate();
    edge_noise.validate();
    if (kind == ExperimentKind::FacebookStyle && graph_path.empty())
        throw ConfigError("facebook-style requires a graph file");
    if (kind == ExperimentKind::FeaturePipeline && (graph_path.empty() || labels_path.empty()))
        throw ConfigError("feature-pipeline requires graph and labels files");
    if (kind != ExperimentKind::FacebookStyle && kind != ExperimentKind::FeaturePipeline) {
        SyntheticConfig synth{benign_size, sybil_size,       avg_degree,
                              attack_edges, master_seed,     benign_scenario,
                              sybil_scenario, benign_seed_count, sybil_seed_count};
        synth.validate();
    }
}

namespace {

std::vector<std::string> all_metrics(const ExperimentConfig& cfg) {
    std::vector<std::string> metrics = {"accuracy", "auc", "fp", "fn", "fpr", "fnr"};
    for (std::size_t k : cfg.topk) metrics.push_back("topk_" + std::to_string(k));
    return metrics;
}

double metric_value(const EvaluationReport& r, const std::string& name) {
    if (name == "accuracy") return r.accuracy;
    if (name == "auc") return r.auc;
    if (name == "fp") return static_cast<double>(r.fp);
    if (name == "fn") return static_cast<double>(r.fn);
    if (name == "fpr") return r.fpr;
    if (name == "fnr") return r.fnr;
    if (name.rfind("topk_", 0) == 0) {
        const std::size_t k = std::stoull(name.substr(5));
        auto it = r.topk_portions.find(k);
        if (it != r.topk_portions.end()) return it->second;
    }
    throw ConfigError("unknown metric '" + name + "'");
}

SyntheticConfig synth_config_at(const ExperimentConfig& cfg, double x) {
    SyntheticConfig synth;
    synth.benign_size = cfg.benign_size;
    synth.sybil_size = cfg.sybil_size;
    synth.avg_degree = cfg.avg_degree;
    synth.attack_edges = cfg.attack_edges;
    synth.benign_scenario = cfg.benign_scenario;
    synth.sybil_scenario = cfg.sybil_scenario;
    synth.benign_seeds = cfg.benign_seed_count;
    synth.sybil_seeds = cfg.sybil_seed_count;
    if (cfg.sweep == SweepVariable::AttackEdges)
        synth.attack_edges = static_cast<std::size_t>(x);
    else if (cfg.sweep == SweepVariable::SybilSize)
        synth.sybil_size = static_cast<NodeId>(x);
    return synth;
}

NoiseModel noise_at(const ExperimentConfig& cfg, double x, bool edge_noise) {
    NoiseModel noise = edge_noise ? cfg.edge_noise : cfg.node_noise;
    const bool swept = edge_noise == (cfg.kind == ExperimentKind::SynthEdgePrior ||
                                      (cfg.kind == ExperimentKind::SeedTargeting &&
                                       cfg.edge_prior_experiment));
    if (!swept) return noise;
    if (cfg.sweep == SweepVariable::NoiseBoth) noise = {x, x};
    if (cfg.sweep == SweepVariable::NoiseFnr) noise.fnr = x;
    return noise;
}

PriorAssignment default_priors_with_seeds(const SyntheticInstance& inst) {
    return sybilbelief_priors(inst.graph, inst.benign_trust_seeds, inst.sybil_trust_seeds);
}

EvaluationReport eval_beliefs(const ExperimentConfig& cfg, const BeliefVector& beliefs,
                              const LabelMap& truth) {
    return evaluate(beliefs, truth, {}, cfg.topk);
}

BeliefVector lbp_beliefs(const ExperimentConfig& cfg, const UndirectedGraph& graph,
                         const PriorAssignment& priors) {
    PairwiseMRF mrf{&graph, &priors, cfg.lbp_iterations};
    return run_lbp(mrf);
}

// Runs `body(point, run)` over the whole sweep grid in a worker pool. Any
// exception is captured and rethrown once, after the pool drains.
template <typename Body>
void for_each_run(const ExperimentConfig& cfg, Body&& body) {
    const std::int64_t points = static_cast<std::int64_t>(cfg.sweep_values.size());
    const std::int64_t total = points * cfg.runs;
    std::string error;
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < total; ++i) {
        try {
            body(static_cast<std::size_t>(i / cfg.runs), static_cast<int>(i % cfg.runs));
        } catch (const std::exception& e) {
#pragma omp critical
            if (error.empty()) error = e.what();
        }
    }
    if (!error.empty()) throw ConfigError(error);
}

void maybe_export_instance(const ExperimentConfig& cfg, const SyntheticInstance& inst, double x,
                           int run) {
    if (!cfg.export_instances || cfg.out_dir.empty() || run != 0) return;
    std::filesystem::create_directories(cfg.out_dir + "/instances");
    std::ostringstream name;
    name << cfg.out_dir << "/instances/point_" << format_double(x) << "_run" << run;
    write_instance(inst, name.str());
}

}  // namespace

SweepOutput run_synth_sweep(const ExperimentConfig& cfg) {
    const bool edge_kind = cfg.kind == ExperimentKind::SynthEdgePrior;
    const bool baselines_only = cfg.kind == ExperimentKind::BaselineCompare;

    SweepOutput output;
    output.sweep_name = cfg.sweep == SweepVariable::AttackEdges ? "attack_edges"
                        : cfg.sweep == SweepVariable::SybilSize ? "sybil_size"
                        : cfg.sweep == SweepVariable::NoiseFnr  ? "fnr"
                                                                : "fpr_fnr";
    output.xs = cfg.sweep_values;

    std::vector<std::string> methods;
    if (baselines_only)
        methods = {"sybilbelief", "sybilrank"};
    else if (edge_kind)
        methods = {"sybilframe", "sybilbelief"};
    else
        methods = {"sybilframe", "node-prior-only", "sybilbelief"};

    for (const std::string& name : methods) {
        MethodSeries series;
        series.method = name;
        series.metrics = name == "sybilrank" ? std::vector<std::string>{"auc"} : all_metrics(cfg);
        series.runs.assign(output.xs.size(), std::vector<EvaluationReport>(cfg.runs));
        output.methods.push_back(std::move(series));
    }

    for_each_run(cfg, [&](std::size_t pi, int run) {
        const double x = cfg.sweep_values[pi];
        const std::uint64_t xb = value_bits(x);
        SyntheticConfig synth = synth_config_at(cfg, x);
        synth.validate();

        Rng graph_rng(derive_seed(cfg.master_seed, {kGraphStream, xb, static_cast<std::uint64_t>(run)}));
        UndirectedGraph benign = generate_pa_region(synth.benign_size, synth.avg_degree, graph_rng);
        UndirectedGraph sybil = generate_pa_region(synth.sybil_size, synth.avg_degree, graph_rng);
        SyntheticInstance inst = wire_attack_edges(benign, sybil, synth.attack_edges, graph_rng);

        Rng seed_rng(derive_seed(cfg.master_seed, {kSeedStream, xb, static_cast<std::uint64_t>(run)}));
        select_trust_seeds(inst, synth.benign_scenario, synth.sybil_scenario, synth.benign_seeds,
                           synth.sybil_seeds, seed_rng);
        maybe_export_instance(cfg, inst, x, run);

        Rng prior_rng(derive_seed(cfg.master_seed, {kPriorStream, xb, static_cast<std::uint64_t>(run)}));

        std::size_t mi = 0;
        if (!baselines_only) {
            PriorAssignment priors;
            if (edge_kind) {
                priors.node_prior = default_priors_with_seeds(inst).node_prior;
                priors.edge_prior =
                    synth_edge_priors(inst.graph, inst.truth, inst.benign_trust_seeds,
                                      inst.sybil_trust_seeds, noise_at(cfg, x, true), prior_rng);
            } else {
                priors.node_prior =
                    synth_node_priors(inst.truth, inst.benign_trust_seeds, inst.sybil_trust_seeds,
                                      noise_at(cfg, x, false), prior_rng);
                priors.edge_prior.assign(inst.graph.edge_count(), 0.9);
            }
            output.methods[mi++].runs[pi][run] =
                eval_beliefs(cfg, lbp_beliefs(cfg, inst.graph, priors), inst.truth);
            if (!edge_kind) {
                BeliefVector prior_only{priors.node_prior};
                output.methods[mi++].runs[pi][run] = eval_beliefs(cfg, prior_only, inst.truth);
            }
        }

        PriorAssignment defaults = default_priors_with_seeds(inst);
        output.methods[mi++].runs[pi][run] =
            eval_beliefs(cfg, lbp_beliefs(cfg, inst.graph, defaults), inst.truth);

        if (baselines_only) {
            TrustVector trust = sybilrank(inst.graph, inst.benign_trust_seeds);
            BeliefVector scores{trust.normalized};
            EvaluationReport report;
            report.auc = auc(scores, inst.truth, {});
            output.methods[mi++].runs[pi][run] = report;
        }
    });

    if (!cfg.out_dir.empty()) write_sweep_outputs(output, cfg.out_dir);
    return output;
}

SweepOutput run_seed_targeting(const ExperimentConfig& cfg) {
    SweepOutput output;
    output.sweep_name = "attack_edges";
    output.xs = cfg.sweep_values;

    const SeedScenario scenarios[2] = {SeedScenario::Avoided, SeedScenario::Targeted};
    for (SeedScenario bs : scenarios) {
        for (SeedScenario ss : scenarios) {
            MethodSeries series;
            series.method = std::string("sybilframe-") + seed_scenario_name(bs) + "-" +
                            seed_scenario_name(ss);
            series.metrics = all_metrics(cfg);
            series.runs.assign(output.xs.size(), std::vector<EvaluationReport>(cfg.runs));
            output.methods.push_back(std::move(series));
        }
    }

    for_each_run(cfg, [&](std::size_t pi, int run) {
        const double x = cfg.sweep_values[pi];
        const std::uint64_t xb = value_bits(x);
        SyntheticConfig synth = synth_config_at(cfg, x);
        synth.validate();

        Rng graph_rng(derive_seed(cfg.master_seed, {kGraphStream, xb, static_cast<std::uint64_t>(run)}));
        UndirectedGraph benign = generate_pa_region(synth.benign_size, synth.avg_degree, graph_rng);
        UndirectedGraph sybil = generate_pa_region(synth.sybil_size, synth.avg_degree, graph_rng);
        SyntheticInstance inst = wire_attack_edges(benign, sybil, synth.attack_edges, graph_rng);

        const std::uint64_t prior_seed =
            derive_seed(cfg.master_seed, {kPriorStream, xb, static_cast<std::uint64_t>(run)});

        // The graph and the prior draws are shared across the four scenario
        // pairs; only seed placement (and its pinning) differs, so scenario
        // comparisons are paired.
        std::size_t mi = 0;
        for (int bi = 0; bi < 2; ++bi) {
            for (int si = 0; si < 2; ++si) {
                SyntheticInstance scenario_inst = inst;
                Rng seed_rng(derive_seed(
                    cfg.master_seed,
                    {kSeedStream, xb, static_cast<std::uint64_t>(run),
                     static_cast<std::uint64_t>(bi * 2 + si)}));
                select_trust_seeds(scenario_inst, scenarios[bi], scenarios[si],
                                   synth.benign_seeds, synth.sybil_seeds, seed_rng);

                Rng prior_rng(prior_seed);
                PriorAssignment priors;
                if (cfg.edge_prior_experiment) {
                    priors.node_prior = default_priors_with_seeds(scenario_inst).node_prior;
                    priors.edge_prior = synth_edge_priors(
                        scenario_inst.graph, scenario_inst.truth, scenario_inst.benign_trust_seeds,
                        scenario_inst.sybil_trust_seeds, noise_at(cfg, x, true), prior_rng);
                } else {
                    priors.node_prior = synth_node_priors(
                        scenario_inst.truth, scenario_inst.benign_trust_seeds,
                        scenario_inst.sybil_trust_seeds, noise_at(cfg, x, false), prior_rng);
                    priors.edge_prior.assign(scenario_inst.graph.edge_count(), 0.9);
                }
                output.methods[mi++].runs[pi][run] = eval_beliefs(
                    cfg, lbp_beliefs(cfg, scenario_inst.graph, priors), scenario_inst.truth);
            }
        }
    });

    if (!cfg.out_dir.empty()) write_sweep_outputs(output, cfg.out_dir);
    return output;
}

SweepOutput run_facebook_style(const ExperimentConfig& cfg, const UndirectedGraph& base) {
    SweepOutput output;
    output.sweep_name = "attack_edges";
    output.xs = cfg.sweep_values;

    const std::vector<std::string> methods = {"sybilframe", "sybilbelief", "sybilrank"};
    for (const std::string& name : methods) {
        MethodSeries series;
        series.method = name;
        series.metrics = name == "sybilrank" ? std::vector<std::string>{"auc"} : all_metrics(cfg);
        series.runs.assign(output.xs.size(), std::vector<EvaluationReport>(cfg.runs));
        output.methods.push_back(std::move(series));
    }

    for_each_run(cfg, [&](std::size_t pi, int run) {
        const double x = cfg.sweep_values[pi];
        const std::uint64_t xb = value_bits(x);
        const std::size_t k = static_cast<std::size_t>(x);

        Rng graph_rng(derive_seed(cfg.master_seed, {kGraphStream, xb, static_cast<std::uint64_t>(run)}));
        SyntheticInstance inst = wire_attack_edges(base, base, k, graph_rng);

        Rng seed_rng(derive_seed(cfg.master_seed, {kSeedStream, xb, static_cast<std::uint64_t>(run)}));
        select_trust_seeds(inst, cfg.benign_scenario, cfg.sybil_scenario, cfg.benign_seed_count,
                           cfg.sybil_seed_count, seed_rng);

        PriorAssignment jaccard;
        jaccard.node_prior = default_priors_with_seeds(inst).node_prior;
        jaccard.edge_prior =
            jaccard_edge_priors(inst.graph, inst.benign_trust_seeds, inst.sybil_trust_seeds);
        output.methods[0].runs[pi][run] =
            eval_beliefs(cfg, lbp_beliefs(cfg, inst.graph, jaccard), inst.truth);

        PriorAssignment defaults = default_priors_with_seeds(inst);
        output.methods[1].runs[pi][run] =
            eval_beliefs(cfg, lbp_beliefs(cfg, inst.graph, defaults), inst.truth);

        TrustVector trust = sybilrank(inst.graph, inst.benign_trust_seeds);
        BeliefVector scores{trust.normalized};
        EvaluationReport report;
        report.auc = auc(scores, inst.truth, {});
        output.methods[2].runs[pi][run] = report;
    });

    if (!cfg.out_dir.empty()) write_sweep_outputs(output, cfg.out_dir);
    return output;
}

FeaturePipelineResult run_feature_pipeline(const ExperimentConfig& cfg,
                                           const DirectedGraph& directed, const LabelMap& truth) {
    if (truth.size() != directed.node_count())
        throw InputError("labels do not cover the directed graph");

    FeaturePipelineResult result;
    UndirectedGraph mutual = mutualize(directed);
    result.component = largest_connected_component(mutual);
    const UndirectedGraph& graph = result.component.graph;
    const NodeId n = graph.node_count();

    result.truth.resize(n);
    for (NodeId v = 0; v < n; ++v) result.truth[v] = truth[result.component.to_original[v]];

    std::vector<NodeFeatureVector> rows =
        node_feature_matrix(directed, graph, result.component.to_original);
    result.features = FeatureMatrix::zeros(n, kNodeFeatureCount);
    for (NodeId v = 0; v < n; ++v) {
        result.features.at(v, 0) = rows[v].req_in;
        result.features.at(v, 1) = rows[v].req_out;
        result.features.at(v, 2) = rows[v].clustering;
    }

    std::vector<NodeId> benign_known, sybil_known;
    std::unordered_set<NodeId> unknown;
    for (NodeId v = 0; v < n; ++v) {
        if (result.truth[v] == Label::Benign)
            benign_known.push_back(v);
        else if (result.truth[v] == Label::Sybil)
            sybil_known.push_back(v);
        else
            unknown.insert(v);
    }

    // Balanced training sample, capped by the smaller class.
    const std::size_t per_class =
        std::min({cfg.train_per_class, benign_known.size(), sybil_known.size()});
    if (per_class < 2) throw InputError("need at least two labeled nodes per class for training");
    Rng train_rng(derive_seed(cfg.master_seed, {kTrainStream}));
    std::vector<NodeId> train_benign = train_rng.sample_without_replacement(benign_known, per_class);
    std::vector<NodeId> train_sybil = train_rng.sample_without_replacement(sybil_known, per_class);

    FeatureMatrix train = FeatureMatrix::zeros(2 * per_class, kNodeFeatureCount);
    std::vector<Label> train_labels(2 * per_class);
    for (std::size_t i = 0; i < per_class; ++i) {
        for (std::size_t j = 0; j < kNodeFeatureCount; ++j) {
            train.at(i, j) = result.features.at(train_benign[i], j);
            train.at(per_class + i, j) = result.features.at(train_sybil[i], j);
        }
        train_labels[i] = Label::Benign;
        train_labels[per_class + i] = Label::Sybil;
    }

    LogisticRegression clf =
        train_classifier(train, train_labels, cfg.class_weights, {.l2 = cfg.l2});
    result.node_priors = classify_to_node_priors(clf, result.features, unknown);

    // Trust seeds come from the training sample (their labels are known) and
    // are pinned over the classifier output.
    const std::size_t bseeds = std::min(cfg.benign_seed_count, train_benign.size());
    const std::size_t sseeds = std::min(cfg.sybil_seed_count, train_sybil.size());
    for (std::size_t i = 0; i < bseeds; ++i) result.node_priors[train_benign[i]] = 0.9;
    for (std::size_t i = 0; i < sseeds; ++i) result.node_priors[train_sybil[i]] = 0.1;

    result.edge_priors = node_priors_to_edge_priors(result.node_priors, graph);

    PriorAssignment priors{result.node_priors, result.edge_priors};
    PairwiseMRF mrf{&graph, &priors, cfg.lbp_iterations};
    result.beliefs = run_lbp(mrf);
    result.ranking = rank(result.beliefs);

    // Training nodes are excluded from both evaluations.
    std::unordered_set<NodeId> exclude = unknown;
    for (NodeId v : train_benign) exclude.insert(v);
    for (NodeId v : train_sybil) exclude.insert(v);

    std::vector<std::size_t> ks;
    for (std::size_t k : cfg.topk)
        if (k <= n) ks.push_back(k);
    result.detection = evaluate(result.beliefs, result.truth, exclude, ks);
    BeliefVector prior_beliefs{result.node_priors};
    result.classifier_alone = evaluate(prior_beliefs, result.truth, exclude, ks);

    if (!cfg.out_dir.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        save_node_features_csv(rows, cfg.out_dir + "/features.csv");
        save_node_priors(result.node_priors, cfg.out_dir + "/node_priors.txt");
        save_edge_priors(graph, result.edge_priors, cfg.out_dir + "/edge_priors.txt");
        save_beliefs(result.beliefs, cfg.out_dir + "/beliefs.txt");
        save_ranking_csv(result.ranking, result.beliefs, cfg.out_dir + "/ranking.csv");
        write_report_csv(result.detection, cfg.out_dir + "/report.csv");
        write_report_csv(result.classifier_alone, cfg.out_dir + "/classifier_report.csv");
    }
    return result;
}

std::string format_double(double value) {
    char buffer[64];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

void write_sweep_outputs(const SweepOutput& output, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    for (const MethodSeries& series : output.methods) {
        for (const std::string& metric : series.metrics) {
            std::ofstream csv(out_dir + "/" + series.method + "_" + metric + ".csv");
            if (!csv) throw InputError("cannot write sweep csv in " + out_dir);
            csv << output.sweep_name << ",run,value,stddev\n";
            for (std::size_t pi = 0; pi < output.xs.size(); ++pi) {
                std::vector<double> values;
                values.reserve(series.runs[pi].size());
                for (std::size_t r = 0; r < series.runs[pi].size(); ++r) {
                    const double v = metric_value(series.runs[pi][r], metric);
                    values.push_back(v);
                    csv << format_double(output.xs[pi]) << "," << r << "," << format_double(v)
                        << ",\n";
                }
                const MetricSummary s = summarize(values);
                csv << format_double(output.xs[pi]) << ",mean," << format_double(s.mean) << ","
                    << format_double(s.stddev) << "\n";
            }
        }

        std::ofstream plot(out_dir + "/plot_" + series.method + ".csv");
        if (!plot) throw InputError("cannot write plot csv in " + out_dir);
        plot << output.sweep_name << ",metric,mean,stddev\n";
        for (std::size_t pi = 0; pi < output.xs.size(); ++pi) {
            for (const std::string& metric : series.metrics) {
                std::vector<double> values;
                for (const auto& report : series.runs[pi])
                    values.push_back(metric_value(report, metric));
                const MetricSummary s = summarize(values);
                plot << format_double(output.xs[pi]) << "," << metric << ","
                     << format_double(s.mean) << "," << format_double(s.stddev) << "\n";
            }
        }
    }
}

void write_report_csv(const EvaluationReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write report: " + path);
    out << "metric,value\n";
    out << "tp," << report.tp << "\n";
    out << "tn," << report.tn << "\n";
    out << "fp," << report.fp << "\n";
    out << "fn," << report.fn << "\n";
    out << "accuracy," << format_double(report.accuracy) << "\n";
    out << "fpr," << format_double(report.fpr) << "\n";
    out << "fnr," << format_double(report.fnr) << "\n";
    out << "auc," << format_double(report.auc) << "\n";
    for (const auto& [k, portion] : report.topk_portions)
        out << "topk_" << k << "," << format_double(portion) << "\n";
}

void write_manifest(const ConfigMap& config, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write manifest: " + path);
    out << config.canonical();
}

}  // namespace sybilframe
