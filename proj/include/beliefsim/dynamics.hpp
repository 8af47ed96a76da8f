#pragma once

#include "beliefsim/belief_net.hpp"
#include "beliefsim/population.hpp"
#include "beliefsim/rng.hpp"

#include <span>
#include <utility>
#include <vector>

namespace beliefsim {

enum class InfluenceMode {
    Convergent,   // delta ~ N(alpha * (b_sender - b_receiver), sigma)
    Reinforcing,  // delta ~ N(alpha * b_sender, sigma)
};

struct DynamicsParams {
    double alpha = 1.0;
    double beta = 1.0;
    double sigma = 0.1;
    InfluenceMode mode = InfluenceMode::Convergent;
};

struct SocialTrace {
    ConceptId x = -1;  // receiver coordinates
    ConceptId y = -1;
    double delta = 0.0;
    bool no_transmittable = false;
    bool fixed_target = false;
};

struct CoherenceTrace {
    ConceptId source = -1;
    ConceptId destination = -1;
    double delta = 0.0;
    bool skipped = false;  // no social edge to anchor the walk
    bool fixed_target = false;
    bool uniform_fallback = false;
};

/// Everything needed to replay one step onto the prior state.
struct StepTrace {
    AgentId receiver = -1;
    AgentId sender = -1;
    SocialTrace social;
    CoherenceTrace coherence;
};

/// Uniform receiver, then a uniform neighbor of it as sender.
std::pair<AgentId, AgentId> select_interaction(const SocialGraph& graph, Rng& rng);

/// Sender concepts that exist in the receiver's network, paired with their
/// receiver-local id, in ascending sender order. Agrees with translate_concept.
void shared_concepts(const Agent& sender, const Agent& receiver,
                     std::vector<std::pair<ConceptId, ConceptId>>& out);

/// Transmits one uniformly chosen transmittable belief of `sender` to
/// `receiver`. A belief is transmittable when both of its endpoints exist in
/// the receiver's network.
SocialTrace social_update(Agent& receiver, const Agent& sender, const DynamicsParams& params,
                          Rng& rng);

/// Gradient step on an edge adjacent to `focal`, picked by a two-step
/// weighted walk from one of the focal endpoints.
CoherenceTrace coherence_update(Agent& receiver, std::pair<ConceptId, ConceptId> focal,
                                const DynamicsParams& params, Rng& rng);

/// Interaction selection, social update, then coherence update on the
/// receiver. Only the receiver's network changes.
StepTrace simulation_step(std::vector<Agent>& agents, const SocialGraph& graph,
                          const DynamicsParams& params, Rng& rng);

/// Re-applies a recorded step.
void replay_step(std::vector<Agent>& agents, const StepTrace& trace);

/// Draws a concept id from a probability vector by inversion.
template <typename Derived>
ConceptId sample_categorical(const Eigen::MatrixBase<Derived>& probability, Rng& rng) {
    const double u = rng.uniform() * probability.sum();
    double acc = 0.0;
    ConceptId last_positive = -1;
    for (Eigen::Index c = 0; c < probability.size(); ++c) {
        if (probability(c) <= 0.0) {
            continue;
        }
        acc += probability(c);
        last_positive = c;
        if (u < acc) {
            return c;
        }
    }
    return last_positive;
}

}  // namespace beliefsim
