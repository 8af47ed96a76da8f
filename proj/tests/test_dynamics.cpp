#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "beliefsim/dynamics.hpp"
#include "beliefsim/walk.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <array>
#include <cmath>
#include <map>

using namespace beliefsim;

namespace {

double chi_square_p(const std::vector<double>& observed, const std::vector<double>& expected) {
    double stat = 0.0;
    for (std::size_t k = 0; k < observed.size(); ++k) {
        stat += (observed[k] - expected[k]) * (observed[k] - expected[k]) / expected[k];
    }
    const boost::math::chi_squared dist(static_cast<double>(observed.size() - 1));
    return boost::math::cdf(boost::math::complement(dist, stat));
}

// Oracle: enumerate every (source -> mid -> dest) path explicitly.
std::vector<double> enumerate_walks(const BeliefNetwork<double>& net, ConceptId source,
                                    const std::vector<ConceptId>& excluded) {
    const auto n = net.size();
    std::vector<double> p(static_cast<std::size_t>(n), 0.0);
    double first_total = 0.0;
    for (ConceptId m = 0; m < n; ++m) {
        if (m != source) first_total += std::abs(net(source, m));
    }
    for (ConceptId m = 0; m < n; ++m) {
        if (m == source) continue;
        double second_total = 0.0;
        for (ConceptId d = 0; d < n; ++d) {
            if (d != m && d != source) second_total += std::abs(net(m, d));
        }
        for (ConceptId d = 0; d < n; ++d) {
            if (d == m || d == source) continue;
            p[d] += std::abs(net(source, m)) / first_total * std::abs(net(m, d)) / second_total;
        }
    }
    double total = 0.0;
    for (ConceptId d = 0; d < n; ++d) {
        if (std::find(excluded.begin(), excluded.end(), d) != excluded.end()) p[d] = 0.0;
        total += p[d];
    }
    for (double& v : p) v /= total;
    return p;
}

BeliefNetwork<double> random_net(Eigen::Index n, Rng& rng, double bound = 0.9) {
    BeliefNetwork<double> net(n);
    for (Eigen::Index x = 0; x < n; ++x)
        for (Eigen::Index y = x + 1; y < n; ++y) net.set_weight(x, y, bound * (2.0 * rng.uniform() - 1.0));
    return net;
}

Agent bare_agent(BeliefNetwork<double> net) {
    Agent a;
    a.beliefs = std::move(net);
    return a;
}

// Two neighbors with every non-fixed belief set to a constant.
std::vector<Agent> pair_population(double receiver_value, double sender_value) {
    const auto g = SocialGraph::from_edges(2, {{0, 1}});
    Rng rng(99);
    auto agents = init_agents(g, rng);
    for (auto [agent, value] : {std::pair{0, receiver_value}, std::pair{1, sender_value}}) {
        auto& net = agents[agent].beliefs;
        for (ConceptId x = 0; x < net.size(); ++x)
            for (ConceptId y = x + 1; y < net.size(); ++y)
                if (!net.is_fixed(x, y)) net.set_weight(x, y, value);
    }
    return agents;
}

}  // namespace

TEST_CASE("select_interaction: forced pair") {
    const auto g = SocialGraph::from_edges(2, {{0, 1}});
    Rng rng(1);
    for (int k = 0; k < 100; ++k) {
        const auto [i, j] = select_interaction(g, rng);
        CHECK(j == 1 - i);
    }
}

TEST_CASE("select_interaction: receivers are uniform") {
    Rng rng(2);
    const auto g = generate_social_graph(100, 200, rng);
    std::vector<double> counts(100, 0.0);
    const int draws = 1'000'000;
    for (int k = 0; k < draws; ++k) {
        const auto [i, j] = select_interaction(g, rng);
        REQUIRE(g.adjacent(i, j));
        counts[i] += 1.0;
    }
    CHECK(chi_square_p(counts, std::vector<double>(100, draws / 100.0)) > 1e-3);
    // Per-agent frequency within 4 binomial standard deviations of 0.01.
    const double sd = std::sqrt(draws * 0.01 * 0.99);
    for (double c : counts) CHECK(std::abs(c - draws * 0.01) < 4 * sd);
}

TEST_CASE("select_interaction: star center picks leaves uniformly") {
    const auto g = SocialGraph::from_edges(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
    Rng rng(3);
    std::vector<double> leaves(4, 0.0);
    int centers = 0;
    while (centers < 100'000) {
        const auto [i, j] = select_interaction(g, rng);
        if (i == 0) {
            leaves[j - 1] += 1.0;
            ++centers;
        } else {
            CHECK(j == 0);
        }
    }
    CHECK(chi_square_p(leaves, std::vector<double>(4, 25'000.0)) > 1e-3);
}

TEST_CASE("shared_concepts agrees with translate_concept") {
    Rng rng(4);
    const auto g = generate_social_graph(40, 120, rng);
    const auto agents = init_agents(g, rng);
    std::vector<std::pair<ConceptId, ConceptId>> merged;
    for (const auto& [u, v] : g.edges) {
        for (auto [s, r] : {std::pair{u, v}, std::pair{v, u}}) {
            shared_concepts(agents[s], agents[r], merged);
            std::vector<std::pair<ConceptId, ConceptId>> direct;
            for (ConceptId c = 0; c < agents[s].beliefs.size(); ++c)
                if (auto t = translate_concept(agents[s], agents[r], c)) direct.emplace_back(c, *t);
            CHECK(merged == direct);
        }
    }
}

TEST_CASE("social_update: convergent, alpha = 1, no noise copies the sender") {
    auto agents = pair_population(0.2, 0.8);
    Rng rng(5);
    const DynamicsParams p{1.0, 0.0, 0.0, InfluenceMode::Convergent};
    int plain = 0;
    for (int k = 0; k < 50; ++k) {
        auto trial = agents;
        const auto t = social_update(trial[0], trial[1], p, rng);
        REQUIRE(!t.no_transmittable);
        if (t.fixed_target) {
            CHECK(trial[0].beliefs == agents[0].beliefs);
            continue;
        }
        // Find the sender belief that was transmitted.
        std::vector<std::pair<ConceptId, ConceptId>> shared;
        shared_concepts(trial[1], trial[0], shared);
        double sent = 0.0;
        for (auto [sx, rx] : shared)
            for (auto [sy, ry] : shared)
                if (rx == t.x && ry == t.y) sent = trial[1].beliefs(sx, sy);
        CHECK(trial[0].beliefs(t.x, t.y) == doctest::Approx(sent).epsilon(1e-15));
        if (agents[0].beliefs(t.x, t.y) == 0.2 && sent == 0.8) {
            ++plain;  // 0.2 + 1.0 * (0.8 - 0.2)
            CHECK(trial[0].beliefs(t.x, t.y) == doctest::Approx(0.8));
        }
    }
    CHECK(plain > 0);
}

TEST_CASE("social_update: zero influence and no noise is the identity") {
    auto agents = pair_population(0.2, 0.8);
    const auto before = agents[0].beliefs;
    Rng rng(6);
    const DynamicsParams p{0.0, 0.0, 0.0, InfluenceMode::Convergent};
    for (int k = 0; k < 100; ++k) social_update(agents[0], agents[1], p, rng);
    CHECK(agents[0].beliefs == before);
}

TEST_CASE("social_update: reinforcing mode clips like-minded beliefs") {
    auto agents = pair_population(0.9, 0.9);
    Rng rng(7);
    const DynamicsParams p{1.0, 0.0, 0.0, InfluenceMode::Reinforcing};
    int checked = 0;
    for (int k = 0; k < 50; ++k) {
        auto trial = agents;
        const auto t = social_update(trial[0], trial[1], p, rng);
        if (t.fixed_target) continue;
        // Sender edges are 0.9 except its fixed +-1 group edges.
        if (std::abs(t.delta - 0.9) < 1e-12) {
            CHECK(trial[0].beliefs(t.x, t.y) == 1.0);
            ++checked;
        }
    }
    CHECK(checked > 0);
}

TEST_CASE("social_update: belief choice is uniform over transmittable pairs") {
    auto agents = pair_population(0.0, 0.0);
    std::vector<std::pair<ConceptId, ConceptId>> shared;
    shared_concepts(agents[1], agents[0], shared);
    const std::size_t k = shared.size();  // pair graph: every sender concept is shared
    CHECK(k == static_cast<std::size_t>(agents[1].beliefs.size()));

    Rng rng(8);
    const DynamicsParams p{0.0, 0.0, 0.0, InfluenceMode::Convergent};
    std::map<std::pair<ConceptId, ConceptId>, double> counts;
    const int draws = 200'000;
    for (int d = 0; d < draws; ++d) {
        const auto t = social_update(agents[0], agents[1], p, rng);
        counts[{std::min(t.x, t.y), std::max(t.x, t.y)}] += 1.0;
    }
    const std::size_t pairs = k * (k - 1) / 2;
    REQUIRE(counts.size() == pairs);
    std::vector<double> observed;
    for (const auto& [edge, c] : counts) observed.push_back(c);
    CHECK(chi_square_p(observed, std::vector<double>(pairs, static_cast<double>(draws) / pairs)) > 1e-3);
}

TEST_CASE("two_step_walk_distribution: equal weights give a uniform law") {
    BeliefNetwork<double> net(4);
    for (ConceptId x = 0; x < 4; ++x)
        for (ConceptId y = x + 1; y < 4; ++y) net.set_weight(x, y, (x + y) % 2 ? 0.5 : -0.5);
    const std::array<ConceptId, 2> excluded{0, 1};
    const auto w = two_step_walk_distribution(net, 0, std::span<const ConceptId>(excluded));
    CHECK(!w.uniform_fallback);
    CHECK(w.probability(0) == 0.0);
    CHECK(w.probability(1) == 0.0);
    CHECK(w.probability(2) == doctest::Approx(0.5));
    CHECK(w.probability(3) == doctest::Approx(0.5));

    const auto open = two_step_walk_distribution(net, 0, std::span<const ConceptId>());
    for (ConceptId d = 1; d < 4; ++d) CHECK(open.probability(d) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("two_step_walk_distribution: one dominant path") {
    BeliefNetwork<double> net(4);
    for (ConceptId x = 0; x < 4; ++x)
        for (ConceptId y = x + 1; y < 4; ++y) net.set_weight(x, y, 1e-6);
    net.set_weight(0, 1, 1.0);
    net.set_weight(1, 2, -1.0);
    const std::array<ConceptId, 2> excluded{0, 3};
    const auto w = two_step_walk_distribution(net, 0, std::span<const ConceptId>(excluded));
    CHECK(w.probability(2) > 0.99);
    const auto oracle = enumerate_walks(net, 0, {0, 3});
    for (ConceptId d = 0; d < 4; ++d) CHECK(w.probability(d) == doctest::Approx(oracle[d]).epsilon(1e-12));
}

TEST_CASE("property: walk law matches path enumeration, sums to one, excludes") {
    Rng rng(9);
    for (int trial = 0; trial < 200; ++trial) {
        const auto n = static_cast<Eigen::Index>(3 + rng.index(12));
        const auto net = random_net(n, rng, 1.0);
        const auto source = static_cast<ConceptId>(rng.index(static_cast<std::size_t>(n)));
        auto partner = static_cast<ConceptId>(rng.index(static_cast<std::size_t>(n - 1)));
        partner += partner >= source;
        const std::array<ConceptId, 2> excluded{source, partner};
        const auto w = two_step_walk_distribution(net, source, std::span<const ConceptId>(excluded));
        CHECK(w.probability.sum() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(w.probability(source) == 0.0);
        CHECK(w.probability(partner) == 0.0);
        CHECK(w.probability.minCoeff() >= 0.0);
        const auto oracle = enumerate_walks(net, source, {source, partner});
        for (ConceptId d = 0; d < n; ++d)
            CHECK(std::abs(w.probability(d) - oracle[d]) < 1e-12);
    }
}

TEST_CASE("two_step_walk_distribution: degenerate inputs") {
    const BeliefNetwork<double> zero(5);
    const std::array<ConceptId, 2> excluded{0, 1};
    const auto w = two_step_walk_distribution(zero, 0, std::span<const ConceptId>(excluded));
    CHECK(w.uniform_fallback);
    CHECK(w.probability(0) == 0.0);
    CHECK(w.probability(1) == 0.0);
    for (ConceptId d = 2; d < 5; ++d) CHECK(w.probability(d) == doctest::Approx(1.0 / 3.0));

    // Source connected only to a mid whose other edges are all zero: the walk stalls.
    BeliefNetwork<double> stall(4);
    stall.set_weight(0, 1, 0.5);
    const auto s = two_step_walk_distribution(stall, 0, std::span<const ConceptId>(excluded));
    CHECK(s.uniform_fallback);

    BeliefNetwork<double> tiny(2);
    tiny.set_weight(0, 1, 0.3);
    CHECK_THROWS_AS(two_step_walk_distribution(tiny, 0, std::span<const ConceptId>(excluded)), std::domain_error);
}

TEST_CASE("coherence_update: gradient step on a balanced context") {
    // b(0,1) = b(0,2) = 1, b(1,2) = 0. Focal edge (0,1). From source 1 the
    // only destination is 2; the target (1,2) has gradient -b(1,0) b(2,0) = -1.
    BeliefNetwork<double> net(3);
    net.set_weight(0, 1, 1.0);
    net.set_weight(0, 2, 1.0);
    const DynamicsParams p{1.0, 1.0, 0.0, InfluenceMode::Convergent};
    Rng rng(10);
    bool saw_source_one = false;
    for (int k = 0; k < 20; ++k) {
        Agent a = bare_agent(net);
        const auto t = coherence_update(a, {0, 1}, p, rng);
        CHECK(t.destination == 2);
        if (t.source == 1) {
            saw_source_one = true;
            CHECK(t.delta == 1.0);
            CHECK(a.beliefs(1, 2) == 1.0);
        } else {
            // Target (0,2): gradient -b(0,1) b(2,1) = 0.
            CHECK(t.delta == 0.0);
            CHECK(a.beliefs(0, 2) == 1.0);
        }
    }
    CHECK(saw_source_one);
}

TEST_CASE("coherence_update: zero coherence and no noise is the identity") {
    Rng rng(11);
    const auto net = random_net(8, rng);
    Agent a = bare_agent(net);
    const DynamicsParams p{1.0, 0.0, 0.0, InfluenceMode::Convergent};
    for (int k = 0; k < 100; ++k) coherence_update(a, {2, 5}, p, rng);
    CHECK(a.beliefs == net);
}

TEST_CASE("coherence_update: latte -> Alice -> Group B picks the latte / Group B belief") {
    // Bob's concepts: self 0, Alice 1, latte 2, Group A 3, Group B 4.
    BeliefNetwork<double> net(5);
    for (ConceptId x = 0; x < 5; ++x)
        for (ConceptId y = x + 1; y < 5; ++y) net.set_weight(x, y, 1e-6);
    net.fix(0, 3, 1.0);
    net.fix(0, 4, -1.0);
    net.set_weight(2, 1, 0.9);   // Alice likes latte
    net.set_weight(1, 4, 0.9);   // Alice belongs to Group B
    const std::array<ConceptId, 2> excluded{2, 1};
    const auto w = two_step_walk_distribution(net, 2, std::span<const ConceptId>(excluded));
    CHECK(w.probability(4) > 0.99);

    const DynamicsParams p{1.0, 1.0, 0.0, InfluenceMode::Convergent};
    Rng rng(12);
    int from_latte = 0;
    for (int k = 0; k < 200; ++k) {
        Agent bob = bare_agent(net);
        const auto t = coherence_update(bob, {1, 2}, p, rng);
        if (t.source == 2 && t.destination == 4) {
            ++from_latte;
            // Balanced context pushes the latte / Group B belief up.
            CHECK(bob.beliefs(2, 4) > net(2, 4));
        }
    }
    CHECK(from_latte > 80);
}

TEST_CASE("property: noiseless coherence steps never raise dissonance") {
    Rng rng(13);
    for (int trial = 0; trial < 300; ++trial) {
        const auto n = static_cast<Eigen::Index>(4 + rng.index(9));
        Agent a = bare_agent(random_net(n, rng));
        const double before = dissonance(a.beliefs);
        const DynamicsParams p{1.0, 0.1 + rng.uniform(), 0.0, InfluenceMode::Convergent};
        auto x = static_cast<ConceptId>(rng.index(static_cast<std::size_t>(n)));
        auto y = static_cast<ConceptId>(rng.index(static_cast<std::size_t>(n - 1)));
        y += y >= x;
        coherence_update(a, {x, y}, p, rng);
        CHECK(dissonance(a.beliefs) <= before + 1e-15);
    }
}

TEST_CASE("property: with beta = 0 coherence deltas are N(0, sigma) noise") {
    Rng rng(14);
    const double sigma = 0.1;
    const DynamicsParams p{1.0, 0.0, sigma, InfluenceMode::Convergent};
    const int n = 40'000;
    double sum = 0.0;
    double sum_sq = 0.0;
    int beyond_2sd = 0;
    Agent a = bare_agent(random_net(8, rng));
    for (int k = 0; k < n; ++k) {
        Agent trial = a;
        const double d = coherence_update(trial, {1, 3}, p, rng).delta;
        sum += d;
        sum_sq += d * d;
        beyond_2sd += std::abs(d) > 2 * sigma;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    CHECK(std::abs(mean) < 4 * sigma / std::sqrt(n));
    CHECK(std::abs(std::sqrt(var) - sigma) < 0.02 * sigma);
    // P(|Z| > 2) = 0.0455.
    const double frac = static_cast<double>(beyond_2sd) / n;
    CHECK(std::abs(frac - 0.0455) < 4 * std::sqrt(0.0455 * 0.9545 / n));
}

TEST_CASE("simulation_step") {
    Rng setup(15);
    const auto g = generate_social_graph(20, 40, setup);
    const auto initial = init_agents(g, setup);

    SUBCASE("frozen dynamics leave the state bit-identical") {
        auto agents = initial;
        Rng rng(16);
        const DynamicsParams p{0.0, 0.0, 0.0, InfluenceMode::Convergent};
        for (int k = 0; k < 2000; ++k) simulation_step(agents, g, p, rng);
        for (std::size_t i = 0; i < agents.size(); ++i) CHECK(agents[i].beliefs == initial[i].beliefs);
    }

    SUBCASE("replaying traces reproduces the state; only the receiver changes") {
        auto agents = initial;
        auto replayed = initial;
        Rng rng(17);
        const DynamicsParams p;
        for (int k = 0; k < 5000; ++k) {
            const auto before = agents;
            const auto t = simulation_step(agents, g, p, rng);
            replay_step(replayed, t);
            CHECK(g.adjacent(t.receiver, t.sender));
            int changed_edges = 0;
            for (std::size_t i = 0; i < agents.size(); ++i) {
                const auto diff = (agents[i].beliefs.weights() - before[i].beliefs.weights()).array() != 0.0;
                const auto count = diff.count() / 2;
                if (static_cast<AgentId>(i) != t.receiver) {
                    CHECK(count == 0);
                }
                changed_edges += static_cast<int>(count);
            }
            CHECK(changed_edges <= 2);
            CHECK(agents[t.receiver].beliefs == replayed[t.receiver].beliefs);
        }
        for (std::size_t i = 0; i < agents.size(); ++i) {
            CHECK(agents[i].beliefs == replayed[i].beliefs);
            const Agent& a = agents[i];
            CHECK(a.beliefs(0, a.concepts.group(a.group)) == 1.0);
            CHECK(a.beliefs(0, a.concepts.group(other(a.group))) == -1.0);
        }
    }

    SUBCASE("same seed, same trajectory") {
        auto a = initial;
        auto b = initial;
        Rng ra(18);
        Rng rb(18);
        for (int k = 0; k < 3000; ++k) {
            simulation_step(a, g, DynamicsParams{}, ra);
            simulation_step(b, g, DynamicsParams{}, rb);
        }
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].beliefs == b[i].beliefs);
    }
}
