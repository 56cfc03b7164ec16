#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sybilframe/classifier.hpp"
#include "sybilframe/eval.hpp"
#include "sybilframe/graph.hpp"
#include "sybilframe/priors.hpp"
#include "sybilframe/synth.hpp"

namespace sybilframe {

// Flat key-value configuration. Files use one "key value" (or "key = value")
// pair per line with optional [section] headers, which are organizational
// only; '#' starts a comment. Command-line flags override file entries.
class ConfigMap {
public:
    static ConfigMap from_file(const std::string& path);

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    double get_double(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_double_list(const std::string& key,
                                        const std::vector<double>& fallback) const;

    const std::map<std::string, std::string>& values() const { return values_; }

    // Canonical one-line-per-key rendering; hashing it names output dirs.
    std::string canonical() const;

private:
    std::map<std::string, std::string> values_;
};

std::uint64_t config_hash(const ConfigMap& config);

enum class ExperimentKind {
    SynthNodePrior,   // randomized node priors, default edge priors
    SynthEdgePrior,   // default node priors, randomized edge priors
    SeedTargeting,    // the four seed-placement scenario combinations
    FacebookStyle,    // one real graph as both regions, Jaccard edge priors
    FeaturePipeline,  // directed features -> classifier -> priors -> LBP
    BaselineCompare,  // trust-propagation and default-prior baselines only
};

enum class SweepVariable { NoiseBoth, NoiseFnr, AttackEdges, SybilSize };

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::SynthNodePrior;
    SweepVariable sweep = SweepVariable::NoiseBoth;
    std::vector<double> sweep_values;
    int runs = 100;
    std::uint64_t master_seed = 0;
    int lbp_iterations = 6;
    std::string out_dir;  // empty: keep results in memory only

    // Synthetic topology (defaults are the basic setup).
    NodeId benign_size = 1000;
    NodeId sybil_size = 400;
    std::size_t avg_degree = 10;
    std::size_t attack_edges = 1000;
    std::size_t benign_seed_count = 1;
    std::size_t sybil_seed_count = 1;
    SeedScenario benign_scenario = SeedScenario::Uniform;
    SeedScenario sybil_scenario = SeedScenario::Uniform;
    NoiseModel node_noise;
    NoiseModel edge_noise;
    bool edge_prior_experiment = false;  // seed-targeting: which prior source

    // File-backed experiments.
    std::string graph_path;
    std::string labels_path;

    // Feature pipeline.
    std::size_t train_per_class = 10000;
    ClassWeights class_weights;
    double l2 = 1e-4;

    std::vector<std::size_t> topk;
    bool export_instances = false;

    void validate() const;
};

ExperimentConfig parse_experiment_config(const ConfigMap& map);
const char* experiment_kind_name(ExperimentKind kind);

// Results of one sweep: per method, per sweep point, one report per run.
struct MethodSeries {
    std::string method;
    std::vector<std::string> metrics;                 // which columns are meaningful
    std::vector<std::vector<EvaluationReport>> runs;  // [point][run]
};

struct SweepOutput {
    std::string sweep_name;  // label of the x column
    std::vector<double> xs;
    std::vector<MethodSeries> methods;
};

// Synthetic sweeps (node-prior, edge-prior, baseline-compare kinds). Runs
// within a point execute in a worker pool; per-run randomness is derived from
// (master seed, sweep value, run index) so results do not depend on thread
// count or on the order of sweep points.
SweepOutput run_synth_sweep(const ExperimentConfig& config);

// Seed-targeting: same instances evaluated under all four scenario pairs.
SweepOutput run_seed_targeting(const ExperimentConfig& config);

// The base graph serves as both regions; sweep variable is the attack-edge
// count. Edge priors come from scaled Jaccard similarity.
SweepOutput run_facebook_style(const ExperimentConfig& config, const UndirectedGraph& base);

struct FeaturePipelineResult {
    ComponentResult component;        // LCC of the mutualized graph
    LabelMap truth;                   // per LCC node
    FeatureMatrix features;           // per LCC node
    std::vector<double> node_priors;  // per LCC node
    std::vector<double> edge_priors;  // per LCC edge
    BeliefVector beliefs;
    std::vector<NodeId> ranking;
    EvaluationReport detection;         // priors + LBP
    EvaluationReport classifier_alone;  // priors thresholded directly
};

// truth is indexed by the directed graph's node ids; Unknown entries are
// excluded from training and evaluation and receive prior 0.5.
FeaturePipelineResult run_feature_pipeline(const ExperimentConfig& config,
                                           const DirectedGraph& directed, const LabelMap& truth);

// One CSV per method per metric (per-run rows plus an aggregate row) and one
// plot-data file per method with (x, metric, mean, stddev) rows.
void write_sweep_outputs(const SweepOutput& output, const std::string& out_dir);

void write_report_csv(const EvaluationReport& report, const std::string& path);

// Resolved settings echo, written alongside experiment outputs.
void write_manifest(const ConfigMap& config, const std::string& path);

std::string format_double(double value);  // stable shortest round-trip formatting

}  // namespace sybilframe
