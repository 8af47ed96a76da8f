#pragma once

#include "beliefsim/dynamics.hpp"
#include "beliefsim/metrics.hpp"
#include "beliefsim/population.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace beliefsim {

struct SimConfig {
    int n_agents = 100;
    int n_edges = 200;
    long long steps = 2'500'000;
    double alpha = 1.0;
    double beta = 1.0;
    double sigma = 0.1;
    InfluenceMode influence_mode = InfluenceMode::Convergent;
    double init_sigma = 1e-5;
    long long sample_interval = 10'000;
    int bin_count = 20;
    std::uint64_t seed = 1;
    bool record_histograms = false;  // histograms at every sample, not only first/last

    DynamicsParams dynamics() const { return {alpha, beta, sigma, influence_mode}; }

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

struct RunResult {
    MetricsSeries series;   // sampled at step 0, every sample_interval, and the last step
    SocialGraph graph;
    std::vector<Agent> final_agents;
    HistogramSet initial_histograms;
    HistogramSet final_histograms;
    int affective_skipped_agents = 0;  // at the final sample
};

/// Seeds for the three independent streams of one run.
enum class Stream : std::uint64_t { Graph = 0, Init = 1, Dynamics = 2 };

RunResult run_simulation(const SimConfig& config);

struct SweepConfig {
    std::vector<double> alpha_grid = default_grid();
    std::vector<double> beta_grid = default_grid();
    int runs_per_cell = 10;
    SimConfig base;  // alpha, beta and seed are overridden per run; base.seed is the sweep base seed

    static std::vector<double> default_grid();
    void validate() const;
};

/// Per-cell means over runs; rows index alpha, columns index beta.
struct SweepGrid {
    std::vector<double> alphas;
    std::vector<double> betas;
    Eigen::MatrixXd opinion_polarization;
    Eigen::MatrixXd affective_polarization;
    Eigen::MatrixXd mean_dissonance;
};

/// Seed of run `run` in cell (alpha_index, beta_index).
std::uint64_t cell_seed(std::uint64_t base_seed, int alpha_index, int beta_index, int run);

/// Config of a single sweep run, derived from the sweep template.
SimConfig cell_config(const SweepConfig& sweep, int alpha_index, int beta_index, int run);

/// Runs every (cell, run) on up to `threads` workers. Results do not depend on
/// the worker count.
SweepGrid run_sweep(const SweepConfig& sweep, int threads = 1);

/// Worker count from BELIEFSIM_THREADS, else hardware concurrency.
int threads_from_env();

}  // namespace beliefsim
