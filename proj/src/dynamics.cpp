#include "beliefsim/dynamics.hpp"

#include "beliefsim/walk.hpp"

#include <array>
#include <stdexcept>
#include <tuple>

namespace beliefsim {

void shared_concepts(const Agent& sender, const Agent& receiver,
                     std::vector<std::pair<ConceptId, ConceptId>>& out) {
    out.clear();
    const ConceptMap& sc = sender.concepts;
    const ConceptMap& rc = receiver.concepts;
    if (auto as_neighbor = rc.neighbor(sender.id)) {
        out.emplace_back(ConceptMap::self(), *as_neighbor);
    }
    // Both neighbor lists are sorted: merge them.
    const auto& sn = sc.neighbors();
    const auto& rn = rc.neighbors();
    std::size_t r = 0;
    for (std::size_t s = 0; s < sn.size(); ++s) {
        const ConceptId sender_local = static_cast<ConceptId>(s) + 1;
        if (sn[s] == receiver.id) {
            out.emplace_back(sender_local, ConceptMap::self());
            continue;
        }
        while (r < rn.size() && rn[r] < sn[s]) {
            ++r;
        }
        if (r < rn.size() && rn[r] == sn[s]) {
            out.emplace_back(sender_local, static_cast<ConceptId>(r) + 1);
        }
    }
    for (auto e : {SharedEntity::Latte, SharedEntity::GroupA, SharedEntity::GroupB}) {
        out.emplace_back(sc.shared(e), rc.shared(e));
    }
}

std::pair<AgentId, AgentId> select_interaction(const SocialGraph& graph, Rng& rng) {
    const auto receiver = static_cast<AgentId>(rng.index(static_cast<std::size_t>(graph.n_agents)));
    const auto& nb = graph.neighbors(receiver);
    if (nb.empty()) {
        throw std::logic_error("select_interaction: agent without neighbors");
    }
    return {receiver, nb[rng.index(nb.size())]};
}

SocialTrace social_update(Agent& receiver, const Agent& sender, const DynamicsParams& params,
                          Rng& rng) {
    thread_local std::vector<std::pair<ConceptId, ConceptId>> shared;
    shared_concepts(sender, receiver, shared);

    SocialTrace trace;
    const std::size_t k = shared.size();
    if (k < 2) {
        trace.no_transmittable = true;
        return trace;
    }

    // Uniform unordered pair {a, b} of the k shared concepts.
    std::size_t a = rng.index(k);
    std::size_t b = rng.index(k - 1);
    if (b >= a) {
        ++b;
    }

    const auto [sx, rx] = shared[a];
    const auto [sy, ry] = shared[b];
    const double sent = sender.beliefs(sx, sy);
    const double mean = params.mode == InfluenceMode::Convergent
                            ? params.alpha * (sent - receiver.beliefs(rx, ry))
                            : params.alpha * sent;

    trace.x = rx;
    trace.y = ry;
    trace.delta = rng.normal(mean, params.sigma);
    trace.fixed_target = receiver.beliefs.is_fixed(rx, ry);
    set_belief_clipped(receiver.beliefs, rx, ry, trace.delta);
    return trace;
}

CoherenceTrace coherence_update(Agent& receiver, std::pair<ConceptId, ConceptId> focal,
                                const DynamicsParams& params, Rng& rng) {
    auto& net = receiver.beliefs;
    net.check_edge(focal.first, focal.second);

    CoherenceTrace trace;
    const bool first = rng.index(2) == 0;
    trace.source = first ? focal.first : focal.second;
    const ConceptId partner = first ? focal.second : focal.first;

    const std::array<ConceptId, 2> excluded{trace.source, partner};
    const auto walk = two_step_walk_distribution(net, trace.source, std::span<const ConceptId>(excluded));
    trace.uniform_fallback = walk.uniform_fallback;
    trace.destination = sample_categorical(walk.probability, rng);

    const double gradient = dissonance_gradient(net, trace.source, trace.destination);
    trace.delta = rng.normal(-params.beta * gradient, params.sigma);
    trace.fixed_target = net.is_fixed(trace.source, trace.destination);
    set_belief_clipped(net, trace.source, trace.destination, trace.delta);
    return trace;
}

StepTrace simulation_step(std::vector<Agent>& agents, const SocialGraph& graph,
                          const DynamicsParams& params, Rng& rng) {
    StepTrace trace;
    std::tie(trace.receiver, trace.sender) = select_interaction(graph, rng);
    Agent& receiver = agents[trace.receiver];
    trace.social = social_update(receiver, agents[trace.sender], params, rng);
    if (trace.social.no_transmittable) {
        trace.coherence.skipped = true;
        return trace;
    }
    trace.coherence = coherence_update(receiver, {trace.social.x, trace.social.y}, params, rng);
    return trace;
}

void replay_step(std::vector<Agent>& agents, const StepTrace& trace) {
    auto& net = agents.at(trace.receiver).beliefs;
    if (!trace.social.no_transmittable) {
        set_belief_clipped(net, trace.social.x, trace.social.y, trace.social.delta);
    }
    if (!trace.coherence.skipped) {
        set_belief_clipped(net, trace.coherence.source, trace.coherence.destination,
                           trace.coherence.delta);
    }
}

}  // namespace beliefsim
