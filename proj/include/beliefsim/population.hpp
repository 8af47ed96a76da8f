#pragma once

#include "beliefsim/belief_net.hpp"
#include "beliefsim/rng.hpp"

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace beliefsim {

using AgentId = int;

/// Raised for parameter combinations that cannot produce a valid run.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Undirected simple graph of agents.
struct SocialGraph {
    int n_agents = 0;
    std::vector<std::pair<AgentId, AgentId>> edges;  // (u, v) with u < v
    std::vector<std::vector<AgentId>> adjacency;     // sorted neighbor lists

    const std::vector<AgentId>& neighbors(AgentId i) const { return adjacency[i]; }
    int degree(AgentId i) const { return static_cast<int>(adjacency[i].size()); }
    bool adjacent(AgentId a, AgentId b) const;

    static SocialGraph from_edges(int n_agents, std::vector<std::pair<AgentId, AgentId>> edges);
};

/// Uniform G(n, m) conditioned on every agent having at least one neighbor.
SocialGraph generate_social_graph(int n_agents, int n_edges, Rng& rng);

enum class Group { A, B };

constexpr Group other(Group g) { return g == Group::A ? Group::B : Group::A; }
constexpr char label(Group g) { return g == Group::A ? 'A' : 'B'; }

/// Entities every agent holds a concept for.
enum class SharedEntity { Latte, GroupA, GroupB };

constexpr SharedEntity entity_of(Group g) {
    return g == Group::A ? SharedEntity::GroupA : SharedEntity::GroupB;
}

/// What a local concept stands for.
struct Entity {
    enum class Kind { Self, Neighbor, Shared };
    Kind kind;
    AgentId agent = -1;                      // Neighbor only
    SharedEntity shared = SharedEntity::Latte;  // Shared only

    friend bool operator==(const Entity&, const Entity&) = default;
};

/// Bijection between an agent's entities and its local concept ids.
///
/// Layout: 0 is Self, 1..k are the neighbors in ascending agent id, then
/// Latte, Group A and Group B.
class ConceptMap {
public:
    ConceptMap() = default;
    explicit ConceptMap(std::vector<AgentId> sorted_neighbors);

    ConceptId size() const { return static_cast<ConceptId>(neighbors_.size()) + 4; }

    static constexpr ConceptId self() { return 0; }
    ConceptId shared(SharedEntity e) const {
        return static_cast<ConceptId>(neighbors_.size()) + 1 + static_cast<ConceptId>(e);
    }
    ConceptId group(Group g) const { return shared(entity_of(g)); }
    ConceptId latte() const { return shared(SharedEntity::Latte); }

    std::optional<ConceptId> neighbor(AgentId k) const;
    AgentId neighbor_at(ConceptId c) const { return neighbors_[c - 1]; }
    ConceptId neighbor_count() const { return static_cast<ConceptId>(neighbors_.size()); }
    bool is_neighbor(ConceptId c) const { return c >= 1 && c <= neighbor_count(); }

    Entity entity(ConceptId c) const;
    std::optional<ConceptId> find(const Entity& e) const;

    const std::vector<AgentId>& neighbors() const { return neighbors_; }

private:
    std::vector<AgentId> neighbors_;
};

struct Agent {
    AgentId id = 0;
    Group group = Group::A;
    BeliefNetwork<double> beliefs;
    ConceptMap concepts;
};

/// Random balanced group partition and belief networks with the two self-group
/// edges fixed at +1 (own group) and -1 (other group). All other weights are
/// N(0, init_sigma), clipped into [-1, 1].
std::vector<Agent> init_agents(const SocialGraph& graph, Rng& rng, double init_sigma = 1e-5);

/// Maps a concept of `sender` into the network of `receiver`. Absent when the
/// receiver has no node for that entity.
std::optional<ConceptId> translate_concept(const Agent& sender, const Agent& receiver,
                                           ConceptId concept_id);

}  // namespace beliefsim
