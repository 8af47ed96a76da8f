// beliefsim: belief-network polarization simulator.
//
//   beliefsim run      --config FILE [--seed S] [--alpha A] ... --out DIR
//   beliefsim sweep    --config FILE ... --out DIR
//   beliefsim validate

#include "beliefsim/config.hpp"
#include "beliefsim/experiment.hpp"
#include "beliefsim/io.hpp"
#include "beliefsim/validation.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

namespace fs = std::filesystem;
using namespace beliefsim;

namespace {

struct Options {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::optional<double> alpha;
    std::optional<double> beta;
    std::optional<double> sigma;
    std::optional<long long> steps;
    std::optional<std::string> mode;
};

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--config", o.config_path, "key = value config file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "random seed");
    cmd->add_option("--alpha", o.alpha, "social influence strength in [0, 1]");
    cmd->add_option("--beta", o.beta, "coherence strength (>= 0)");
    cmd->add_option("--sigma", o.sigma, "noise standard deviation (>= 0)");
    cmd->add_option("--steps", o.steps, "time steps per run");
    cmd->add_option("--mode", o.mode, "influence mode")->check(CLI::IsMember({"convergent", "reinforcing"}));
    cmd->add_option("--out", o.out_dir, "output directory");
}

ParsedConfig load(const Options& o) {
    ConfigOverrides ov;
    ov.seed = o.seed;
    ov.alpha = o.alpha;
    ov.beta = o.beta;
    ov.sigma = o.sigma;
    ov.steps = o.steps;
    if (o.mode) {
        ov.mode = parse_mode(*o.mode);
    }
    return parse_config(o.config_path, ov);
}

int cmd_run(const Options& o) {
    const std::string started = utc_timestamp();
    const ParsedConfig cfg = load(o);
    const fs::path out = o.out_dir;

    const RunResult run = run_simulation(cfg.sim);

    const auto files = write_run_outputs(run, cfg.sweep, out, started);

    std::printf("final P_O=%.4f P_A=%.4f mean_dissonance=%.4f (P_A skipped %d agents)\n",
                run.series.opinion_polarization.back(), run.series.affective_polarization.back(),
                run.series.mean_dissonance.back(), run.affective_skipped_agents);
    std::printf("wrote %zu files to %s\n", files.size(), out.string().c_str());
    return 0;
}

int cmd_sweep(const Options& o) {
    const std::string started = utc_timestamp();
    const ParsedConfig cfg = load(o);
    const fs::path out = o.out_dir;
    const int threads = threads_from_env();

    std::printf("sweep: %zu x %zu cells, %d runs each, %lld steps, %d workers\n", cfg.sweep.alpha_grid.size(),
                cfg.sweep.beta_grid.size(), cfg.sweep.runs_per_cell, cfg.sweep.base.steps, threads);
    const SweepGrid grid = run_sweep(cfg.sweep, threads);

    const auto files = write_sweep_outputs(grid, cfg.sweep, out, started);
    std::printf("wrote %zu files to %s\n", files.size(), out.string().c_str());
    return 0;
}

int cmd_validate(const Options& o) {
    validation::SuiteOptions opts;
    if (o.seed) {
        opts.seed = *o.seed;
    }
    const auto outcomes = validation::run_validation_suite(opts);
    bool all = true;
    for (const auto& c : outcomes) {
        std::printf("%-16s %s  %s\n", c.name.c_str(), c.passed ? "PASS" : "FAIL", c.detail.c_str());
        all = all && c.passed;
    }
    std::printf("validate: %s\n", all ? "all checks passed" : "FAILURES");
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Belief-network polarization simulator"};
    app.require_subcommand(1);

    Options run_opts;
    Options sweep_opts;
    Options validate_opts;
    auto* run = app.add_subcommand("run", "simulate one trajectory");
    auto* sweep = app.add_subcommand("sweep", "alpha x beta grid averaged over repeated runs");
    auto* validate = app.add_subcommand("validate", "run the oracle suite");
    add_common(run, run_opts);
    add_common(sweep, sweep_opts);
    add_common(validate, validate_opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            return cmd_run(run_opts);
        }
        if (*sweep) {
            return cmd_sweep(sweep_opts);
        }
        return cmd_validate(validate_opts);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
