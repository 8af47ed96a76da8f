#pragma once

#include "beliefsim/population.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace beliefsim {

/// |mean_A b_i(Self, concept) - mean_B b_j(Self, concept)|.
double opinion_polarization(std::span<const Agent> agents, SharedEntity concept_entity = SharedEntity::Latte);

struct AffectivePolarization {
    double value = 0.0;
    int skipped_agents = 0;  // agents lacking an ingroup or an outgroup neighbor
};

/// Population mean of (mean valence toward ingroup neighbors - mean valence
/// toward outgroup neighbors). Agents without both kinds of neighbor are left
/// out of the mean and counted in skipped_agents.
AffectivePolarization affective_polarization(std::span<const Agent> agents);

double mean_dissonance(std::span<const Agent> agents);

/// Fixed-range histogram over [-1, 1]; the value 1 falls in the top bin.
struct Histogram {
    Eigen::VectorXi counts;

    explicit Histogram(int bin_count = 2) : counts(Eigen::VectorXi::Zero(bin_count)) {}
    int bin_count() const { return static_cast<int>(counts.size()); }
    int total() const { return counts.sum(); }
    double bin_lower(int k) const { return -1.0 + 2.0 * k / bin_count(); }
    double bin_upper(int k) const { return -1.0 + 2.0 * (k + 1) / bin_count(); }
    void add(double value);

    friend bool operator==(const Histogram&, const Histogram&) = default;
};

struct HistogramSet {
    Histogram latte_group_a;    // b_i(Self, Latte), Group A members
    Histogram latte_group_b;    // b_i(Self, Latte), Group B members
    Histogram group_a_latte;    // b_i(GroupA, Latte), everyone
    Histogram ingroup;          // b_i(Self, k), k a same-group neighbor
    Histogram outgroup;         // b_i(Self, k), k an other-group neighbor

    friend bool operator==(const HistogramSet&, const HistogramSet&) = default;
};

HistogramSet snapshot_histograms(std::span<const Agent> agents, int bin_count);

/// Sampled observables of one run.
struct MetricsSeries {
    std::vector<long long> steps;
    std::vector<double> opinion_polarization;
    std::vector<double> affective_polarization;
    std::vector<double> mean_dissonance;
    std::vector<HistogramSet> histograms;  // empty unless requested

    std::size_t size() const { return steps.size(); }
    bool empty() const { return steps.empty(); }
};

}  // namespace beliefsim
