// Command-line front end: experiment sweeps, the feature pipeline, and
// single-shot rank / eval / baseline runs over the text file formats.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sybilframe/baselines.hpp"
#include "sybilframe/errors.hpp"
#include "sybilframe/eval.hpp"
#include "sybilframe/experiment.hpp"
#include "sybilframe/graph_io.hpp"
#include "sybilframe/inference.hpp"
#include "sybilframe/priors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace sybilframe;

namespace {

// Every config-file key is also a flag of the same name; flags win.
class FlagSet {
public:
    explicit FlagSet(CLI::App* cmd) : cmd_(cmd) {}

    void add(const std::string& key, const std::string& help) {
        auto value = std::make_shared<std::string>();
        cmd_->add_option("--" + key, *value, help);
        entries_.emplace_back(key, value);
    }

    void apply(ConfigMap& map) const {
        for (const auto& [key, value] : entries_)
            if (cmd_->count("--" + key) > 0) map.set(key, *value);
    }

private:
    CLI::App* cmd_;
    std::vector<std::pair<std::string, std::shared_ptr<std::string>>> entries_;
};

std::string timestamp() {
    const std::time_t now = std::time(nullptr);
    char buffer[32];
    std::tm tm_buf{};
    localtime_r(&now, &tm_buf);
    std::strftime(buffer, sizeof(buffer), "%Y%m%d-%H%M%S", &tm_buf);
    return buffer;
}

std::string resolve_out_dir(ConfigMap& map) {
    std::string dir = map.get_string("out-dir", "");
    if (dir.empty()) {
        char hex[32];
        std::snprintf(hex, sizeof(hex), "%016llx",
                      static_cast<unsigned long long>(config_hash(map)));
        dir = "runs/" + std::string(hex) + "-" + timestamp();
        map.set("out-dir", dir);
    }
    std::filesystem::create_directories(dir);
    return dir;
}

void apply_threads(const ConfigMap& map) {
#ifdef _OPENMP
    const int threads = static_cast<int>(map.get_int("threads", 0));
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)map;
#endif
}

void print_sweep_summary(const SweepOutput& output) {
    for (const MethodSeries& series : output.methods) {
        for (std::size_t pi = 0; pi < output.xs.size(); ++pi) {
            std::vector<double> acc, aucs;
            for (const auto& report : series.runs[pi]) {
                acc.push_back(report.accuracy);
                aucs.push_back(report.auc);
            }
            const MetricSummary a = summarize(acc);
            const MetricSummary u = summarize(aucs);
            std::printf("%-22s %s=%-7g accuracy=%.4f (sd %.4f)  auc=%.4f (sd %.4f)\n",
                        series.method.c_str(), output.sweep_name.c_str(), output.xs[pi], a.mean,
                        a.stddev, u.mean, u.stddev);
        }
    }
}

// forced_kind pins the experiment kind for the dedicated subcommands;
// synth-sweep leaves it open so its config key / --kind flag dispatches.
ConfigMap load_config(const std::string& config_path, const FlagSet& flags,
                      const std::string& forced_kind) {
    ConfigMap map;
    if (!config_path.empty()) map = ConfigMap::from_file(config_path);
    flags.apply(map);
    if (!forced_kind.empty()) map.set("kind", forced_kind);
    if (!map.has("kind")) map.set("kind", "synth-node-prior");
    return map;
}

void register_common_flags(FlagSet& flags) {
    flags.add("seed", "master RNG seed");
    flags.add("threads", "worker thread count (0 = library default)");
    flags.add("lbp-iters", "belief propagation rounds");
    flags.add("out-dir", "output directory (default runs/<config-hash>-<timestamp>)");
    flags.add("runs", "experiments per sweep point");
    flags.add("sweep", "sweep variable: fpr-fnr | fnr | attack-edges | sybil-size");
    flags.add("sweep-values", "comma-separated sweep points");
    flags.add("benign-size", "benign region size");
    flags.add("sybil-size", "Sybil region size");
    flags.add("avg-degree", "region average degree (even)");
    flags.add("attack-edges", "cross-region edge count when not swept");
    flags.add("benign-seeds", "benign trust seed count");
    flags.add("sybil-seeds", "Sybil trust seed count");
    flags.add("benign-scenario", "benign seed placement: uniform | si | sii");
    flags.add("sybil-scenario", "Sybil seed placement: uniform | si | sii");
    flags.add("node-fpr", "node prior generator FPR");
    flags.add("node-fnr", "node prior generator FNR");
    flags.add("edge-fpr", "edge prior generator FPR");
    flags.add("edge-fnr", "edge prior generator FNR");
    flags.add("prior-source", "seed-targeting prior source: node | edge");
    flags.add("graph", "edge list input path");
    flags.add("labels", "label file input path");
    flags.add("train-per-class", "training sample size per class");
    flags.add("benign-weight", "benign class loss weight");
    flags.add("sybil-weight", "Sybil class loss weight");
    flags.add("l2", "logistic regression ridge strength");
    flags.add("topk", "comma-separated k values for ranking portions");
    flags.add("export-instances", "write the first instance per sweep point");
}

int run_experiment_command(const std::string& forced_kind, const std::string& config_path,
                           const FlagSet& flags) {
    ConfigMap map = load_config(config_path, flags, forced_kind);
    apply_threads(map);
    const std::string out_dir = resolve_out_dir(map);
    ExperimentConfig cfg = parse_experiment_config(map);
    cfg.out_dir = out_dir;
    write_manifest(map, out_dir + "/manifest.txt");

    const std::string kind = map.get_string("kind", "");
    if (kind == "facebook-style") {
        auto loaded = load_undirected_edge_list(cfg.graph_path);
        print_sweep_summary(run_facebook_style(cfg, loaded.graph));
    } else if (kind == "feature-pipeline") {
        auto loaded = load_directed_edge_list(cfg.graph_path);
        LabelMap truth = load_labels(cfg.labels_path, loaded.graph.node_count(), &loaded.remap);
        auto result = run_feature_pipeline(cfg, loaded.graph, truth);
        std::printf("pipeline: accuracy=%.4f auc=%.4f (classifier alone: accuracy=%.4f auc=%.4f)\n",
                    result.detection.accuracy, result.detection.auc,
                    result.classifier_alone.accuracy, result.classifier_alone.auc);
    } else if (kind == "seed-targeting") {
        print_sweep_summary(run_seed_targeting(cfg));
    } else {
        print_sweep_summary(run_synth_sweep(cfg));
    }
    std::printf("outputs written to %s\n", out_dir.c_str());
    return 0;
}

NodeId max_node_id_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    unsigned long long max_id = 0;
    std::string line;
    bool any = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        unsigned long long id = 0;
        if (std::sscanf(line.c_str(), "%llu", &id) == 1) {
            max_id = std::max(max_id, id);
            any = true;
        }
    }
    if (!any) throw InputError("no records in " + path);
    return static_cast<NodeId>(max_id + 1);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sybil detection via prior-augmented belief propagation"};
    app.require_subcommand(1);

    std::string config_path;

    struct ExperimentCmd {
        CLI::App* cmd;
        std::unique_ptr<FlagSet> flags;
        std::string kind;
    };
    std::vector<ExperimentCmd> experiments;
    for (const auto& [name, help] :
         std::vector<std::pair<std::string, std::string>>{
             {"synth-sweep", "synthetic two-region sweeps with generated priors"},
             {"facebook-style", "duplicate a real graph as both regions, Jaccard edge priors"},
             {"feature-pipeline", "directed features -> classifier -> priors -> inference"},
         }) {
        CLI::App* cmd = app.add_subcommand(name, help);
        cmd->add_option("--config", config_path, "key-value config file");
        auto flags = std::make_unique<FlagSet>(cmd);
        register_common_flags(*flags);
        if (name == "synth-sweep") {
            flags->add("kind",
                       "synth-node-prior | synth-edge-prior | seed-targeting | baseline-compare");
        }
        experiments.push_back({cmd, std::move(flags), name == "synth-sweep" ? "" : name});
    }

    CLI::App* rank_cmd = app.add_subcommand("rank", "run inference over prior files");
    std::string rank_graph, rank_node_priors, rank_edge_priors, rank_seeds, rank_out = "rank-out";
    int rank_iters = 6, rank_threads = 0;
    bool rank_log_domain = false;
    double rank_residual = 0.0;
    rank_cmd->add_option("--graph", rank_graph, "edge list")->required();
    rank_cmd->add_option("--node-priors", rank_node_priors, "node prior file (default 0.5)");
    rank_cmd->add_option("--edge-priors", rank_edge_priors, "edge prior file (default 0.9)");
    rank_cmd->add_option("--seeds", rank_seeds, "label-format trust seeds, pinned to 0.9/0.1");
    rank_cmd->add_option("--lbp-iters", rank_iters, "belief propagation rounds");
    rank_cmd->add_option("--threads", rank_threads, "thread count");
    rank_cmd->add_flag("--log-domain", rank_log_domain, "evaluate products in log space");
    rank_cmd->add_option("--residual", rank_residual, "early-stop residual (diagnostic)");
    rank_cmd->add_option("--out-dir", rank_out, "output directory");

    CLI::App* eval_cmd = app.add_subcommand("eval", "score beliefs against ground truth");
    std::string eval_beliefs, eval_labels, eval_out = "eval-out", eval_topk;
    eval_cmd->add_option("--beliefs", eval_beliefs, "node_id belief file")->required();
    eval_cmd->add_option("--labels", eval_labels, "label file (unknown rows are excluded)")
        ->required();
    eval_cmd->add_option("--topk", eval_topk, "comma-separated k values");
    eval_cmd->add_option("--out-dir", eval_out, "output directory");

    CLI::App* base_cmd = app.add_subcommand("baseline", "trust propagation / default-prior runs");
    std::string base_graph, base_seeds, base_method = "sybilrank", base_out = "baseline-out";
    int base_iters = -1, base_lbp_iters = 6, base_threads = 0;
    base_cmd->add_option("--graph", base_graph, "edge list")->required();
    base_cmd->add_option("--seeds", base_seeds, "label-format trust seeds")->required();
    base_cmd->add_option("--method", base_method, "sybilrank | sybilbelief");
    base_cmd->add_option("--iterations", base_iters, "power iterations (-1 = ceil(log2 n))");
    base_cmd->add_option("--lbp-iters", base_lbp_iters, "rounds for the sybilbelief method");
    base_cmd->add_option("--threads", base_threads, "thread count");
    base_cmd->add_option("--out-dir", base_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        for (const auto& exp : experiments) {
            if (!exp.cmd->parsed()) continue;
            return run_experiment_command(exp.kind, config_path, *exp.flags);
        }

        if (rank_cmd->parsed()) {
#ifdef _OPENMP
            if (rank_threads > 0) omp_set_num_threads(rank_threads);
#endif
            auto loaded = load_undirected_edge_list(rank_graph);
            const NodeId n = loaded.graph.node_count();
            PriorAssignment priors;
            priors.node_prior = rank_node_priors.empty()
                                    ? std::vector<double>(n, 0.5)
                                    : load_node_priors(rank_node_priors, n);
            priors.edge_prior = rank_edge_priors.empty()
                                    ? std::vector<double>(loaded.graph.edge_count(), 0.9)
                                    : load_edge_priors(loaded.graph, rank_edge_priors);
            if (!rank_seeds.empty()) {
                LabelMap seeds = load_labels(rank_seeds, n, &loaded.remap);
                for (NodeId v = 0; v < n; ++v) {
                    if (seeds[v] == Label::Benign) priors.node_prior[v] = 0.9;
                    if (seeds[v] == Label::Sybil) priors.node_prior[v] = 0.1;
                }
            }
            for (double& p : priors.node_prior) p = clamp_prior(p);
            for (double& p : priors.edge_prior) p = clamp_prior(p);

            PairwiseMRF mrf{&loaded.graph, &priors, rank_iters};
            LbpStats stats;
            LbpOptions options;
            options.log_domain = rank_log_domain;
            options.residual_tolerance = rank_residual;
            options.stats = &stats;
            BeliefVector beliefs = run_lbp(mrf, options);

            std::filesystem::create_directories(rank_out);
            save_beliefs(beliefs, rank_out + "/beliefs.txt");
            save_ranking_csv(rank(beliefs), beliefs, rank_out + "/ranking.csv");
            std::printf("ran %d rounds (final residual %.3g); outputs in %s\n", stats.rounds,
                        stats.last_residual, rank_out.c_str());
            return 0;
        }

        if (eval_cmd->parsed()) {
            const NodeId n = std::max(max_node_id_in(eval_beliefs), max_node_id_in(eval_labels));
            BeliefVector beliefs = load_beliefs(eval_beliefs, n);
            LabelMap truth = load_labels(eval_labels, n);
            std::unordered_set<NodeId> exclude;
            for (NodeId v = 0; v < n; ++v)
                if (truth[v] == Label::Unknown) exclude.insert(v);
            std::vector<std::size_t> ks;
            if (!eval_topk.empty()) {
                ConfigMap tmp;
                tmp.set("topk", eval_topk);
                for (double k : tmp.get_double_list("topk", {}))
                    ks.push_back(static_cast<std::size_t>(k));
            }
            EvaluationReport report = evaluate(beliefs, truth, exclude, ks);
            std::filesystem::create_directories(eval_out);
            write_report_csv(report, eval_out + "/report.csv");
            std::printf("accuracy=%.4f fpr=%.4f fnr=%.4f auc=%.4f (fp=%zu fn=%zu)\n",
                        report.accuracy, report.fpr, report.fnr, report.auc, report.fp, report.fn);
            return 0;
        }

        if (base_cmd->parsed()) {
#ifdef _OPENMP
            if (base_threads > 0) omp_set_num_threads(base_threads);
#endif
            auto loaded = load_undirected_edge_list(base_graph);
            const NodeId n = loaded.graph.node_count();
            LabelMap seeds = load_labels(base_seeds, n, &loaded.remap);
            std::vector<NodeId> benign_seeds, sybil_seeds;
            for (NodeId v = 0; v < n; ++v) {
                if (seeds[v] == Label::Benign) benign_seeds.push_back(v);
                if (seeds[v] == Label::Sybil) sybil_seeds.push_back(v);
            }
            std::filesystem::create_directories(base_out);
            BeliefVector scores;
            if (base_method == "sybilrank") {
                TrustVector trust = sybilrank(loaded.graph, benign_seeds, base_iters);
                scores.bel = trust.normalized;
            } else if (base_method == "sybilbelief") {
                PriorAssignment priors =
                    sybilbelief_priors(loaded.graph, benign_seeds, sybil_seeds);
                scores = run_lbp({&loaded.graph, &priors, base_lbp_iters});
            } else {
                throw ConfigError("unknown baseline method '" + base_method + "'");
            }
            save_beliefs(scores, base_out + "/scores.txt");
            save_ranking_csv(rank(scores), scores, base_out + "/ranking.csv");
            std::printf("outputs written to %s\n", base_out.c_str());
            return 0;
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const InputError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
