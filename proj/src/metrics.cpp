#include "beliefsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace beliefsim {

double opinion_polarization(std::span<const Agent> agents, SharedEntity concept_entity) {
    double sum_a = 0.0;
    double sum_b = 0.0;
    int n_a = 0;
    int n_b = 0;
    for (const Agent& agent : agents) {
        const double opinion = agent.beliefs(ConceptMap::self(), agent.concepts.shared(concept_entity));
        if (agent.group == Group::A) {
            sum_a += opinion;
            ++n_a;
        } else {
            sum_b += opinion;
            ++n_b;
        }
    }
    if (n_a == 0 || n_b == 0) {
        throw std::domain_error("opinion_polarization: both groups must be non-empty");
    }
    return std::abs(sum_a / n_a - sum_b / n_b);
}

AffectivePolarization affective_polarization(std::span<const Agent> agents) {
    // Neighbor affiliation is read from the population itself.
    AffectivePolarization out;
    double total = 0.0;
    int counted = 0;
    for (const Agent& agent : agents) {
        double in_sum = 0.0;
        double out_sum = 0.0;
        int n_in = 0;
        int n_out = 0;
        for (ConceptId c = 1; c <= agent.concepts.neighbor_count(); ++c) {
            const double valence = agent.beliefs(ConceptMap::self(), c);
            if (agents[agent.concepts.neighbor_at(c)].group == agent.group) {
                in_sum += valence;
                ++n_in;
            } else {
                out_sum += valence;
                ++n_out;
            }
        }
        if (n_in == 0 || n_out == 0) {
            ++out.skipped_agents;
            continue;
        }
        total += in_sum / n_in - out_sum / n_out;
        ++counted;
    }
    out.value = counted > 0 ? total / counted : 0.0;
    return out;
}

double mean_dissonance(std::span<const Agent> agents) {
    if (agents.empty()) {
        throw std::domain_error("mean_dissonance: empty population");
    }
    double total = 0.0;
    for (const Agent& agent : agents) {
        total += dissonance(agent.beliefs);
    }
    return total / static_cast<double>(agents.size());
}

void Histogram::add(double value) {
    const int bins = bin_count();
    int k = static_cast<int>((value + 1.0) / 2.0 * bins);
    counts(std::clamp(k, 0, bins - 1)) += 1;
}

HistogramSet snapshot_histograms(std::span<const Agent> agents, int bin_count) {
    if (bin_count < 2) {
        throw std::invalid_argument("snapshot_histograms: bin_count must be at least 2");
    }
    HistogramSet h{Histogram(bin_count), Histogram(bin_count), Histogram(bin_count),
                   Histogram(bin_count), Histogram(bin_count)};
    for (const Agent& agent : agents) {
        const auto& net = agent.beliefs;
        const auto& cm = agent.concepts;
        (agent.group == Group::A ? h.latte_group_a : h.latte_group_b)
            .add(net(ConceptMap::self(), cm.latte()));
        h.group_a_latte.add(net(cm.group(Group::A), cm.latte()));
        for (ConceptId c = 1; c <= cm.neighbor_count(); ++c) {
            const bool same = agents[cm.neighbor_at(c)].group == agent.group;
            (same ? h.ingroup : h.outgroup).add(net(ConceptMap::self(), c));
        }
    }
    return h;
}

}  // namespace beliefsim
