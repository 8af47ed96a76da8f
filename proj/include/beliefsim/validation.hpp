#pragma once

// Brute-force oracles. None of these call the code path they check: triads
// are enumerated explicitly, walks are sampled step by step, and determinism
// is checked by running twice.

#include "beliefsim/belief_net.hpp"
#include "beliefsim/experiment.hpp"
#include "beliefsim/rng.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace beliefsim::validation {

/// Dissonance by explicit enumeration of every unordered triple.
double brute_force_dissonance(const BeliefNetwork<double>& net);

/// Central difference of brute_force_dissonance with respect to b(x, y).
double fd_gradient(const BeliefNetwork<double>& net, ConceptId x, ConceptId y, double step);

/// One literal non-backtracking two-step walk. Returns nullopt when the walk
/// stalls or lands on an excluded concept (callers resample).
std::optional<ConceptId> sample_two_step_walk(const BeliefNetwork<double>& net, ConceptId source,
                                              std::span<const ConceptId> excluded, Rng& rng);

struct ChiSquareResult {
    bool passed = false;
    bool skipped = false;  // degenerate distribution
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
    long long samples = 0;
};

inline constexpr double kSignificance = 1e-3;

/// Compares sampled walk frequencies against `expected` (defaults to the
/// exact two_step_walk_distribution) with a chi-square test at kSignificance.
/// Categories with expected count below 5 are pooled.
ChiSquareResult walk_frequency_check(const BeliefNetwork<double>& net, ConceptId source,
                                     std::span<const ConceptId> excluded, long long n_samples, Rng& rng,
                                     std::optional<Eigen::VectorXd> expected = std::nullopt);

/// Runs `config` twice and compares final weight matrices and metric series bit for bit.
bool replay_check(const SimConfig& config);

/// Runs `sweep` once per worker count and compares the grids bit for bit.
bool sweep_replay_check(const SweepConfig& sweep, std::span<const int> thread_counts);

/// Random symmetric network with weights uniform in (-bound, bound).
BeliefNetwork<double> random_network(Eigen::Index n_concepts, Rng& rng, double bound = 0.9);

struct CheckOutcome {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct SuiteOptions {
    int gradient_networks = 100;
    int walk_networks = 20;
    long long walk_samples = 1'000'000;
    std::uint64_t seed = 20240601;
};

/// The oracle suite behind `beliefsim validate`.
std::vector<CheckOutcome> run_validation_suite(const SuiteOptions& options);

}  // namespace beliefsim::validation
