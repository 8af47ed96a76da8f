#include "beliefsim/population.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace beliefsim {

namespace {

constexpr int kMaxGraphAttempts = 100000;

}  // namespace

bool SocialGraph::adjacent(AgentId a, AgentId b) const {
    const auto& nb = adjacency[a];
    return std::binary_search(nb.begin(), nb.end(), b);
}

SocialGraph SocialGraph::from_edges(int n_agents, std::vector<std::pair<AgentId, AgentId>> edges) {
    SocialGraph g;
    g.n_agents = n_agents;
    g.adjacency.assign(n_agents, {});
    for (auto& [u, v] : edges) {
        if (u == v || u < 0 || v < 0 || u >= n_agents || v >= n_agents) {
            throw std::invalid_argument("SocialGraph: invalid edge (" + std::to_string(u) + ", " +
                                        std::to_string(v) + ")");
        }
        if (u > v) {
            std::swap(u, v);
        }
        g.adjacency[u].push_back(v);
        g.adjacency[v].push_back(u);
    }
    for (auto& nb : g.adjacency) {
        std::sort(nb.begin(), nb.end());
        if (std::adjacent_find(nb.begin(), nb.end()) != nb.end()) {
            throw std::invalid_argument("SocialGraph: duplicate edge");
        }
    }
    std::sort(edges.begin(), edges.end());
    g.edges = std::move(edges);
    return g;
}

SocialGraph generate_social_graph(int n_agents, int n_edges, Rng& rng) {
    if (n_agents < 2) {
        throw ConfigError("n_agents must be at least 2");
    }
    const long long max_edges = static_cast<long long>(n_agents) * (n_agents - 1) / 2;
    if (n_edges > max_edges) {
        throw ConfigError("n_edges=" + std::to_string(n_edges) + " exceeds C(n_agents, 2)=" +
                          std::to_string(max_edges));
    }
    if (2LL * n_edges < n_agents) {
        throw ConfigError("n_edges=" + std::to_string(n_edges) +
                          " is too small for every agent to have a neighbor");
    }

    std::vector<std::pair<AgentId, AgentId>> pairs;
    pairs.reserve(static_cast<std::size_t>(max_edges));
    for (AgentId u = 0; u < n_agents; ++u) {
        for (AgentId v = u + 1; v < n_agents; ++v) {
            pairs.emplace_back(u, v);
        }
    }

    std::vector<int> degree(n_agents);
    for (int attempt = 0; attempt < kMaxGraphAttempts; ++attempt) {
        // Partial Fisher-Yates: the first n_edges pairs are a uniform m-subset.
        for (int k = 0; k < n_edges; ++k) {
            const std::size_t pick = k + rng.index(pairs.size() - k);
            std::swap(pairs[k], pairs[pick]);
        }
        std::fill(degree.begin(), degree.end(), 0);
        for (int k = 0; k < n_edges; ++k) {
            ++degree[pairs[k].first];
            ++degree[pairs[k].second];
        }
        if (std::find(degree.begin(), degree.end(), 0) == degree.end()) {
            return SocialGraph::from_edges(
                n_agents, {pairs.begin(), pairs.begin() + n_edges});
        }
    }
    throw ConfigError("could not draw a graph without isolated agents after " +
                      std::to_string(kMaxGraphAttempts) + " attempts");
}

ConceptMap::ConceptMap(std::vector<AgentId> sorted_neighbors)
    : neighbors_(std::move(sorted_neighbors)) {
    if (!std::is_sorted(neighbors_.begin(), neighbors_.end())) {
        throw std::invalid_argument("ConceptMap: neighbors must be sorted");
    }
}

std::optional<ConceptId> ConceptMap::neighbor(AgentId k) const {
    const auto it = std::lower_bound(neighbors_.begin(), neighbors_.end(), k);
    if (it == neighbors_.end() || *it != k) {
        return std::nullopt;
    }
    return static_cast<ConceptId>(it - neighbors_.begin()) + 1;
}

Entity ConceptMap::entity(ConceptId c) const {
    if (c < 0 || c >= size()) {
        throw std::invalid_argument("ConceptMap: concept id " + std::to_string(c) + " out of range");
    }
    if (c == self()) {
        return {Entity::Kind::Self};
    }
    if (is_neighbor(c)) {
        return {Entity::Kind::Neighbor, neighbor_at(c)};
    }
    return {Entity::Kind::Shared, -1, static_cast<SharedEntity>(c - neighbor_count() - 1)};
}

std::optional<ConceptId> ConceptMap::find(const Entity& e) const {
    switch (e.kind) {
        case Entity::Kind::Self:
            return self();
        case Entity::Kind::Neighbor:
            return neighbor(e.agent);
        case Entity::Kind::Shared:
            return shared(e.shared);
    }
    return std::nullopt;
}

std::vector<Agent> init_agents(const SocialGraph& graph, Rng& rng, double init_sigma) {
    const int n = graph.n_agents;
    std::vector<AgentId> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (int k = n - 1; k > 0; --k) {
        std::swap(order[k], order[rng.index(static_cast<std::size_t>(k) + 1)]);
    }

    std::vector<Agent> agents(n);
    for (int rank = 0; rank < n; ++rank) {
        agents[order[rank]].group = rank < n / 2 ? Group::A : Group::B;
    }

    for (AgentId i = 0; i < n; ++i) {
        Agent& agent = agents[i];
        agent.id = i;
        agent.concepts = ConceptMap(graph.neighbors(i));
        agent.beliefs = BeliefNetwork<double>(agent.concepts.size());

        const ConceptId self = ConceptMap::self();
        const ConceptId own = agent.concepts.group(agent.group);
        const ConceptId opposed = agent.concepts.group(other(agent.group));
        for (ConceptId x = 0; x < agent.beliefs.size(); ++x) {
            for (ConceptId y = x + 1; y < agent.beliefs.size(); ++y) {
                if (x == self && y == own) {
                    agent.beliefs.fix(x, y, 1.0);
                } else if (x == self && y == opposed) {
                    agent.beliefs.fix(x, y, -1.0);
                } else {
                    agent.beliefs.set_weight(x, y, std::clamp(rng.normal(0.0, init_sigma), -1.0, 1.0));
                }
            }
        }
    }
    return agents;
}

std::optional<ConceptId> translate_concept(const Agent& sender, const Agent& receiver,
                                           ConceptId concept_id) {
    const Entity e = sender.concepts.entity(concept_id);
    switch (e.kind) {
        case Entity::Kind::Self:
            return receiver.concepts.neighbor(sender.id);
        case Entity::Kind::Neighbor:
            if (e.agent == receiver.id) {
                return ConceptMap::self();
            }
            return receiver.concepts.neighbor(e.agent);
        case Entity::Kind::Shared:
            return receiver.concepts.shared(e.shared);
    }
    return std::nullopt;
}

}  // namespace beliefsim
