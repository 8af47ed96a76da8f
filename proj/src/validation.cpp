#include "beliefsim/validation.hpp"

#include "beliefsim/walk.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace beliefsim::validation {

namespace {

// Picks index c in [0, n) with probability weight(c) / sum, skipping
// disallowed ones. Returns -1 when the total weight is zero.
template <typename WeightFn>
ConceptId draw(Eigen::Index n, WeightFn weight, Rng& rng) {
    double total = 0.0;
    for (Eigen::Index c = 0; c < n; ++c) {
        total += weight(c);
    }
    if (total <= 0.0) {
        return -1;
    }
    const double u = rng.uniform() * total;
    double acc = 0.0;
    ConceptId last = -1;
    for (Eigen::Index c = 0; c < n; ++c) {
        const double w = weight(c);
        if (w <= 0.0) {
            continue;
        }
        acc += w;
        last = c;
        if (u < acc) {
            return c;
        }
    }
    return last;
}

bool same_agents(const std::vector<Agent>& a, const std::vector<Agent>& b) {
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!(a[i].beliefs == b[i].beliefs) || a[i].group != b[i].group) {
            return false;
        }
    }
    return true;
}

bool same_series(const MetricsSeries& a, const MetricsSeries& b) {
    return a.steps == b.steps && a.opinion_polarization == b.opinion_polarization &&
           a.affective_polarization == b.affective_polarization && a.mean_dissonance == b.mean_dissonance;
}

}  // namespace

double brute_force_dissonance(const BeliefNetwork<double>& net) {
    const Eigen::Index n = net.size();
    if (n < 3) {
        throw std::domain_error("brute_force_dissonance: fewer than 3 concepts");
    }
    double total = 0.0;
    long long count = 0;
    for (Eigen::Index x = 0; x < n; ++x) {
        for (Eigen::Index y = x + 1; y < n; ++y) {
            for (Eigen::Index z = y + 1; z < n; ++z) {
                total += -net(x, y) * net(x, z) * net(y, z);
                ++count;
            }
        }
    }
    return total / static_cast<double>(count);
}

double fd_gradient(const BeliefNetwork<double>& net, ConceptId x, ConceptId y, double step) {
    if (!(step > 0.0)) {
        throw std::invalid_argument("fd_gradient: step must be positive");
    }
    net.check_edge(x, y);
    BeliefNetwork<double> probe = net;
    const double b = net(x, y);
    probe.set_weight(x, y, b + step);
    const double up = brute_force_dissonance(probe);
    probe.set_weight(x, y, b - step);
    const double down = brute_force_dissonance(probe);
    return (up - down) / (2.0 * step);
}

std::optional<ConceptId> sample_two_step_walk(const BeliefNetwork<double>& net, ConceptId source,
                                              std::span<const ConceptId> excluded, Rng& rng) {
    const Eigen::Index n = net.size();
    const ConceptId mid = draw(n, [&](Eigen::Index c) { return c == source ? 0.0 : std::abs(net(source, c)); }, rng);
    if (mid < 0) {
        return std::nullopt;
    }
    const ConceptId dest = draw(
        n, [&](Eigen::Index c) { return c == mid || c == source ? 0.0 : std::abs(net(mid, c)); }, rng);
    if (dest < 0 || std::find(excluded.begin(), excluded.end(), dest) != excluded.end()) {
        return std::nullopt;
    }
    return dest;
}

ChiSquareResult walk_frequency_check(const BeliefNetwork<double>& net, ConceptId source,
                                     std::span<const ConceptId> excluded, long long n_samples, Rng& rng,
                                     std::optional<Eigen::VectorXd> expected) {
    ChiSquareResult result;
    const Eigen::Index n = net.size();
    if (!expected) {
        const auto exact = two_step_walk_distribution(net, source, excluded);
        if (exact.uniform_fallback) {
            result.skipped = true;
            return result;
        }
        expected = exact.probability;
    }
    if (expected->size() != n) {
        throw std::invalid_argument("walk_frequency_check: expected distribution has wrong size");
    }

    Eigen::VectorXd observed = Eigen::VectorXd::Zero(n);
    long long accepted = 0;
    long long attempts = 0;
    const long long max_attempts = 1000 * n_samples;
    while (accepted < n_samples) {
        if (++attempts > max_attempts) {
            result.skipped = true;
            return result;
        }
        if (const auto dest = sample_two_step_walk(net, source, excluded, rng)) {
            observed(*dest) += 1.0;
            ++accepted;
        }
    }
    result.samples = accepted;

    // Pool sparse categories so the chi-square approximation holds.
    const Eigen::VectorXd expected_counts = *expected * static_cast<double>(n_samples);
    std::vector<std::pair<double, double>> bins;  // (expected, observed)
    std::pair<double, double> pooled{0.0, 0.0};
    for (Eigen::Index c = 0; c < n; ++c) {
        if (expected_counts(c) <= 0.0) {
            if (observed(c) > 0.0) {
                // Mass where the distribution says there is none.
                result.statistic = std::numeric_limits<double>::infinity();
                result.p_value = 0.0;
                return result;
            }
            continue;
        }
        if (expected_counts(c) < 5.0) {
            pooled.first += expected_counts(c);
            pooled.second += observed(c);
        } else {
            bins.emplace_back(expected_counts(c), observed(c));
        }
    }
    if (pooled.first > 0.0) {
        if (pooled.first >= 5.0 || bins.empty()) {
            bins.push_back(pooled);
        } else {
            auto smallest = std::min_element(bins.begin(), bins.end());
            smallest->first += pooled.first;
            smallest->second += pooled.second;
        }
    }

    result.dof = static_cast<int>(bins.size()) - 1;
    for (const auto& [e, o] : bins) {
        result.statistic += (o - e) * (o - e) / e;
    }
    if (result.dof < 1) {
        result.p_value = 1.0;
    } else {
        const boost::math::chi_squared dist(result.dof);
        result.p_value = boost::math::cdf(boost::math::complement(dist, result.statistic));
    }
    result.passed = result.p_value >= kSignificance;
    return result;
}

bool replay_check(const SimConfig& config) {
    const RunResult first = run_simulation(config);
    const RunResult second = run_simulation(config);
    return same_agents(first.final_agents, second.final_agents) && same_series(first.series, second.series);
}

bool sweep_replay_check(const SweepConfig& sweep, std::span<const int> thread_counts) {
    std::optional<SweepGrid> reference;
    for (int threads : thread_counts) {
        SweepGrid grid = run_sweep(sweep, threads);
        if (!reference) {
            reference = std::move(grid);
            continue;
        }
        if (grid.opinion_polarization != reference->opinion_polarization ||
            grid.affective_polarization != reference->affective_polarization ||
            grid.mean_dissonance != reference->mean_dissonance) {
            return false;
        }
    }
    return true;
}

BeliefNetwork<double> random_network(Eigen::Index n_concepts, Rng& rng, double bound) {
    BeliefNetwork<double> net(n_concepts);
    for (Eigen::Index x = 0; x < n_concepts; ++x) {
        for (Eigen::Index y = x + 1; y < n_concepts; ++y) {
            net.set_weight(x, y, bound * (2.0 * rng.uniform() - 1.0));
        }
    }
    return net;
}

std::vector<CheckOutcome> run_validation_suite(const SuiteOptions& options) {
    std::vector<CheckOutcome> outcomes;
    Rng rng(options.seed);

    {
        double worst = 0.0;
        double worst_dissonance = 0.0;
        for (int k = 0; k < options.gradient_networks; ++k) {
            const auto net = random_network(6, rng);
            worst_dissonance = std::max(worst_dissonance, std::abs(dissonance(net) - brute_force_dissonance(net)));
            for (ConceptId x = 0; x < 6; ++x) {
                for (ConceptId y = x + 1; y < 6; ++y) {
                    worst = std::max(worst, std::abs(dissonance_gradient(net, x, y) - fd_gradient(net, x, y, 1e-5)));
                }
            }
        }
        std::ostringstream detail;
        detail << options.gradient_networks << " networks, max |analytic - fd| = " << worst
               << ", max |matrix - enumerated dissonance| = " << worst_dissonance;
        outcomes.push_back({"gradient", worst <= 1e-8 && worst_dissonance <= 1e-12, detail.str()});
    }

    {
        int passed = 0;
        int skipped = 0;
        double min_p = 1.0;
        bool mutation_caught = true;
        for (int k = 0; k < options.walk_networks; ++k) {
            const auto n = static_cast<Eigen::Index>(4 + rng.index(9));
            auto net = random_network(n, rng, 1.0);
            // Every other network is skewed toward a few heavy edges.
            if (k % 2 == 1) {
                for (Eigen::Index x = 0; x < n; ++x) {
                    for (Eigen::Index y = x + 1; y < n; ++y) {
                        const double w = net(x, y);
                        net.set_weight(x, y, w * w * w * w * w);
                    }
                }
            }
            const auto source = static_cast<ConceptId>(rng.index(static_cast<std::size_t>(n)));
            auto partner = static_cast<ConceptId>(rng.index(static_cast<std::size_t>(n - 1)));
            if (partner >= source) {
                ++partner;
            }
            const std::array<ConceptId, 2> excluded{source, partner};
            const auto result = walk_frequency_check(net, source, excluded, options.walk_samples, rng);
            skipped += result.skipped;
            passed += result.passed;
            if (!result.skipped) {
                min_p = std::min(min_p, result.p_value);
            }

            if (k == 0) {
                Eigen::VectorXd corrupted = two_step_walk_distribution(net, source, std::span(excluded)).probability;
                Eigen::Index top = 0;
                corrupted.maxCoeff(&top);
                corrupted(top) += 0.05;
                corrupted /= corrupted.sum();
                mutation_caught =
                    !walk_frequency_check(net, source, excluded, options.walk_samples, rng, corrupted).passed;
            }
        }
        std::ostringstream detail;
        detail << passed << "/" << options.walk_networks << " networks pass at "
               << options.walk_samples << " samples (min p = " << min_p << ", skipped " << skipped
               << "); corrupted distribution " << (mutation_caught ? "rejected" : "NOT rejected");
        outcomes.push_back({"walk_frequency", passed == options.walk_networks && mutation_caught, detail.str()});
    }

    {
        SimConfig small;
        small.n_agents = 10;
        small.n_edges = 15;
        small.steps = 10'000;
        small.sample_interval = 1'000;
        small.seed = options.seed;
        const bool same = replay_check(small);
        SimConfig other = small;
        other.seed = options.seed + 1;
        const bool differs = !same_agents(run_simulation(small).final_agents, run_simulation(other).final_agents);
        outcomes.push_back({"replay_run", same && differs,
                            std::string("same seed ") + (same ? "identical" : "DIFFERS") + ", different seed " +
                                (differs ? "differs" : "IDENTICAL")});
    }

    {
        SweepConfig sweep;
        sweep.alpha_grid = {0.0, 0.5, 1.0};
        sweep.beta_grid = {0.0, 1.0};
        sweep.runs_per_cell = 2;
        sweep.base.n_agents = 10;
        sweep.base.n_edges = 15;
        sweep.base.steps = 2'000;
        sweep.base.seed = options.seed;
        const std::array<int, 3> workers{1, 2, 8};
        const bool same = sweep_replay_check(sweep, workers);
        outcomes.push_back({"replay_sweep", same,
                            std::string("workers 1, 2, 8: ") + (same ? "identical grids" : "grids DIFFER")});
    }

    return outcomes;
}

}  // namespace beliefsim::validation
