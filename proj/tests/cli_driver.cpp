// End-to-end checks of the command-line binary: exit codes, file outputs and
// thread-count independence. Takes the binary path as argv[1].

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "sybilframe/graph_io.hpp"
#include "sybilframe/rng.hpp"
#include "sybilframe/synth.hpp"

namespace fs = std::filesystem;
using namespace sybilframe;

namespace {

int failures = 0;

#define REQUIRE(cond, msg)                                                   \
    do {                                                                     \
        if (!(cond)) {                                                       \
            std::cerr << "[FAIL] " << __LINE__ << ": " << msg << "\n";       \
            ++failures;                                                      \
        }                                                                    \
    } while (0)

int run(const std::string& command) {
    const int status = std::system((command + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: cli_driver <binary>\n";
        return 1;
    }
    const std::string bin = argv[1];
    const fs::path work = fs::temp_directory_path() / "cli_driver";
    fs::remove_all(work);
    fs::create_directories(work);

    const std::string sweep_args =
        " --runs 2 --benign-size 100 --sybil-size 40 --avg-degree 6 --attack-edges 40"
        " --sweep-values 0,0.2 --seed 11";

    // exit code 0 + expected outputs
    {
        const fs::path out = work / "sweep";
        int code = run(bin + " synth-sweep" + sweep_args + " --out-dir " + out.string());
        REQUIRE(code == 0, "synth-sweep should succeed, got " << code);
        REQUIRE(fs::exists(out / "sybilframe_accuracy.csv"), "per-metric csv missing");
        REQUIRE(fs::exists(out / "sybilbelief_auc.csv"), "baseline csv missing");
        REQUIRE(fs::exists(out / "plot_sybilframe.csv"), "plot data missing");
        REQUIRE(fs::exists(out / "manifest.txt"), "manifest missing");
        const std::string csv = slurp(out / "sybilframe_accuracy.csv");
        REQUIRE(csv.rfind("fpr_fnr,run,value,stddev\n", 0) == 0, "csv header mismatch");
        REQUIRE(csv.find(",mean,") != std::string::npos, "aggregate row missing");
    }

    // byte-identical outputs across thread counts
    {
        const fs::path out1 = work / "threads1";
        const fs::path out2 = work / "threads2";
        REQUIRE(run(bin + " synth-sweep" + sweep_args + " --threads 1 --out-dir " +
                    out1.string()) == 0,
                "threads=1 run failed");
        REQUIRE(run(bin + " synth-sweep" + sweep_args + " --threads 2 --out-dir " +
                    out2.string()) == 0,
                "threads=2 run failed");
        for (const auto& entry : fs::directory_iterator(out1)) {
            if (entry.path().filename() == "manifest.txt") continue;  // echoes the thread count
            REQUIRE(slurp(entry.path()) == slurp(out2 / entry.path().filename()),
                    "thread-count dependent output: " << entry.path().filename());
        }
    }

    // config file + flag override
    {
        const fs::path cfg = work / "exp.cfg";
        {
            std::ofstream out(cfg);
            out << "[experiment]\nruns 2\nseed 11\nsweep-values 0,0.2\n"
                << "[topology]\nbenign-size 100\nsybil-size 40\navg-degree 6\nattack-edges 40\n";
        }
        const fs::path out = work / "fromcfg";
        int code = run(bin + " synth-sweep --config " + cfg.string() + " --runs 1 --out-dir " +
                       out.string());
        REQUIRE(code == 0, "config-driven run failed");
        const std::string manifest = slurp(out / "manifest.txt");
        REQUIRE(manifest.find("runs 1") != std::string::npos, "flag should override config file");
    }

    // exit code 2 on config violations
    {
        int code = run(bin + " synth-sweep" + sweep_args + " --runs 0 --out-dir " +
                       (work / "bad").string());
        REQUIRE(code == 2, "runs=0 should exit 2, got " << code);
        code = run(bin + " synth-sweep" + sweep_args + " --avg-degree 7 --out-dir " +
                    (work / "bad2").string());
        REQUIRE(code == 2, "odd avg-degree should exit 2, got " << code);
        code = run(bin + " nonsense-subcommand");
        REQUIRE(code == 2, "unknown subcommand should exit 2, got " << code);
    }

    // exit code 3 on input errors
    {
        int code = run(bin + " facebook-style --graph /nonexistent.edges --runs 1 --out-dir " +
                       (work / "fb").string());
        REQUIRE(code == 3, "missing graph should exit 3, got " << code);
    }

    // rank -> eval -> baseline round trip on an exported instance
    {
        SyntheticConfig synth;
        synth.benign_size = 120;
        synth.sybil_size = 50;
        synth.avg_degree = 6;
        synth.attack_edges = 40;
        Rng rng(3);
        SyntheticInstance inst = generate_instance(synth, rng);
        const std::string prefix = (work / "inst").string();
        write_instance(inst, prefix);

        const fs::path rank_out = work / "rank";
        int code = run(bin + " rank --graph " + prefix + ".edges --seeds " + prefix +
                       ".seeds --out-dir " + rank_out.string());
        REQUIRE(code == 0, "rank failed with " << code);
        REQUIRE(fs::exists(rank_out / "beliefs.txt"), "beliefs missing");
        REQUIRE(fs::exists(rank_out / "ranking.csv"), "ranking missing");

        const fs::path eval_out = work / "eval";
        code = run(bin + " eval --beliefs " + (rank_out / "beliefs.txt").string() + " --labels " +
                   prefix + ".labels --topk 10,50 --out-dir " + eval_out.string());
        REQUIRE(code == 0, "eval failed with " << code);
        const std::string report = slurp(eval_out / "report.csv");
        REQUIRE(report.find("accuracy,") != std::string::npos, "report lacks accuracy row");
        REQUIRE(report.find("topk_10,") != std::string::npos, "report lacks topk row");

        const fs::path base_out = work / "baseline";
        code = run(bin + " baseline --graph " + prefix + ".edges --seeds " + prefix +
                   ".seeds --method sybilrank --out-dir " + base_out.string());
        REQUIRE(code == 0, "baseline failed with " << code);
        REQUIRE(fs::exists(base_out / "ranking.csv"), "baseline ranking missing");

        code = run(bin + " baseline --graph " + prefix + ".edges --seeds " + prefix +
                   ".seeds --method nonsense --out-dir " + (work / "basebad").string());
        REQUIRE(code == 2, "unknown method should exit 2, got " << code);
    }

    if (failures == 0) {
        std::cout << "cli_driver: all checks passed\n";
        return 0;
    }
    std::cout << "cli_driver: " << failures << " failures\n";
    return 1;
}
