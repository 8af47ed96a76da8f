#include "beliefsim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace beliefsim {

namespace {

void require(bool ok, const std::string& key, const std::string& what) {
    if (!ok) {
        throw ConfigError(key + ": " + what);
    }
}

void sample(const std::vector<Agent>& agents, long long step, const SimConfig& config,
            MetricsSeries& series, int& skipped) {
    series.steps.push_back(step);
    series.opinion_polarization.push_back(opinion_polarization(agents));
    const auto pa = affective_polarization(agents);
    series.affective_polarization.push_back(pa.value);
    skipped = pa.skipped_agents;
    series.mean_dissonance.push_back(mean_dissonance(agents));
    if (config.record_histograms) {
        series.histograms.push_back(snapshot_histograms(agents, config.bin_count));
    }
}

}  // namespace

void SimConfig::validate() const {
    require(n_agents >= 2, "n_agents", "must be at least 2");
    const long long max_edges = static_cast<long long>(n_agents) * (n_agents - 1) / 2;
    require(n_edges <= max_edges, "n_edges", "exceeds n_agents*(n_agents-1)/2");
    require(2LL * n_edges >= n_agents, "n_edges", "must be at least n_agents/2");
    require(steps >= 1, "steps", "must be at least 1");
    require(alpha >= 0.0 && alpha <= 1.0, "alpha", "must lie in [0, 1]");
    require(beta >= 0.0, "beta", "must be non-negative");
    require(sigma >= 0.0, "sigma", "must be non-negative");
    require(init_sigma >= 0.0, "init_sigma", "must be non-negative");
    require(sample_interval >= 1, "sample_interval", "must be at least 1");
    require(bin_count >= 2, "bin_count", "must be at least 2");
}

RunResult run_simulation(const SimConfig& config) {
    config.validate();

    Rng graph_rng(derive_seed(config.seed, {static_cast<std::uint64_t>(Stream::Graph)}));
    Rng init_rng(derive_seed(config.seed, {static_cast<std::uint64_t>(Stream::Init)}));
    Rng rng(derive_seed(config.seed, {static_cast<std::uint64_t>(Stream::Dynamics)}));

    RunResult result;
    result.graph = generate_social_graph(config.n_agents, config.n_edges, graph_rng);
    std::vector<Agent> agents = init_agents(result.graph, init_rng, config.init_sigma);
    result.initial_histograms = snapshot_histograms(agents, config.bin_count);

    const DynamicsParams params = config.dynamics();
    int skipped = 0;
    sample(agents, 0, config, result.series, skipped);
    for (long long step = 1; step <= config.steps; ++step) {
        simulation_step(agents, result.graph, params, rng);
        if (step % config.sample_interval == 0 || step == config.steps) {
            sample(agents, step, config, result.series, skipped);
        }
    }

    result.affective_skipped_agents = skipped;
    result.final_histograms = snapshot_histograms(agents, config.bin_count);
    result.final_agents = std::move(agents);
    return result;
}

std::vector<double> SweepConfig::default_grid() {
    std::vector<double> grid;
    for (int k = 0; k <= 10; ++k) {
        grid.push_back(k / 10.0);
    }
    return grid;
}

void SweepConfig::validate() const {
    require(!alpha_grid.empty(), "alpha_grid", "must not be empty");
    require(!beta_grid.empty(), "beta_grid", "must not be empty");
    for (double a : alpha_grid) {
        require(a >= 0.0 && a <= 1.0, "alpha_grid", "values must lie in [0, 1]");
    }
    for (double b : beta_grid) {
        require(b >= 0.0, "beta_grid", "values must be non-negative");
    }
    require(runs_per_cell >= 1, "runs_per_cell", "must be at least 1");
    base.validate();
}

std::uint64_t cell_seed(std::uint64_t base_seed, int alpha_index, int beta_index, int run) {
    return derive_seed(base_seed, {static_cast<std::uint64_t>(alpha_index),
                                   static_cast<std::uint64_t>(beta_index),
                                   static_cast<std::uint64_t>(run)});
}

SimConfig cell_config(const SweepConfig& sweep, int alpha_index, int beta_index, int run) {
    SimConfig c = sweep.base;
    c.alpha = sweep.alpha_grid.at(alpha_index);
    c.beta = sweep.beta_grid.at(beta_index);
    c.seed = cell_seed(sweep.base.seed, alpha_index, beta_index, run);
    c.record_histograms = false;
    // Only the final state matters for a sweep.
    c.sample_interval = c.steps;
    return c;
}

SweepGrid run_sweep(const SweepConfig& sweep, int threads) {
    sweep.validate();
    const int n_alpha = static_cast<int>(sweep.alpha_grid.size());
    const int n_beta = static_cast<int>(sweep.beta_grid.size());
    const int runs = sweep.runs_per_cell;
    const int n_tasks = n_alpha * n_beta * runs;

    struct Final {
        double po = 0.0;
        double pa = 0.0;
        double d = 0.0;
    };
    std::vector<Final> finals(n_tasks);

    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (int task = next++; task < n_tasks; task = next++) {
            const int run = task % runs;
            const int bi = (task / runs) % n_beta;
            const int ai = task / (runs * n_beta);
            try {
                const RunResult r = run_simulation(cell_config(sweep, ai, bi, run));
                finals[task] = {r.series.opinion_polarization.back(),
                                r.series.affective_polarization.back(),
                                r.series.mean_dissonance.back()};
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next = n_tasks;
            }
        }
    };

    const int n_workers = std::clamp(threads, 1, std::max(1, n_tasks));
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < n_workers; ++w) {
            pool.emplace_back(worker);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    SweepGrid grid;
    grid.alphas = sweep.alpha_grid;
    grid.betas = sweep.beta_grid;
    grid.opinion_polarization = Eigen::MatrixXd::Zero(n_alpha, n_beta);
    grid.affective_polarization = Eigen::MatrixXd::Zero(n_alpha, n_beta);
    grid.mean_dissonance = Eigen::MatrixXd::Zero(n_alpha, n_beta);
    // Summation order is fixed by task index, so the means are bit-stable.
    for (int task = 0; task < n_tasks; ++task) {
        const int bi = (task / runs) % n_beta;
        const int ai = task / (runs * n_beta);
        grid.opinion_polarization(ai, bi) += finals[task].po / runs;
        grid.affective_polarization(ai, bi) += finals[task].pa / runs;
        grid.mean_dissonance(ai, bi) += finals[task].d / runs;
    }
    return grid;
}

int threads_from_env() {
    if (const char* env = std::getenv("BELIEFSIM_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n >= 1) {
                return n;
            }
        } catch (const std::exception&) {
        }
        throw ConfigError("BELIEFSIM_THREADS: expected a positive integer, got '" + std::string(env) + "'");
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace beliefsim
