#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <stdexcept>
#include <string>

namespace beliefsim {

/// Concept index local to one agent's belief network, dense in [0, size()).
using ConceptId = Eigen::Index;

/// Number of unordered concept triples in a network of n concepts.
constexpr Eigen::Index triad_count(Eigen::Index n) {
    return n < 3 ? 0 : n * (n - 1) * (n - 2) / 6;
}

/// A complete, symmetric, signed weighted graph over concepts.
///
/// Weights live in [-1, 1]. The diagonal is structurally absent and stored as
/// zero, which lets dissonance and its gradient be written as plain matrix
/// products. Edges marked fixed are immutable through set_belief_clipped.
template <typename Scalar>
class BeliefNetwork {
public:
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Mask = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

    BeliefNetwork() = default;

    explicit BeliefNetwork(Eigen::Index n_concepts)
        : weights_(Matrix::Zero(n_concepts, n_concepts)),
          fixed_(Mask::Constant(n_concepts, n_concepts, false)) {}

    /// Builds a network from a full weight matrix. Only the upper triangle is
    /// read; the diagonal is ignored.
    explicit BeliefNetwork(const Eigen::Ref<const Matrix>& weights)
        : BeliefNetwork(weights.rows()) {
        if (weights.rows() != weights.cols()) {
            throw std::invalid_argument("BeliefNetwork: weight matrix must be square");
        }
        for (Eigen::Index x = 0; x < size(); ++x) {
            for (Eigen::Index y = x + 1; y < size(); ++y) {
                set_weight(x, y, weights(x, y));
            }
        }
    }

    Eigen::Index size() const { return weights_.rows(); }

    Scalar operator()(ConceptId x, ConceptId y) const { return weights_(x, y); }

    const Matrix& weights() const { return weights_; }
    const Mask& fixed_mask() const { return fixed_; }

    bool is_fixed(ConceptId x, ConceptId y) const { return fixed_(x, y); }

    /// Writes a weight symmetrically, bypassing the fixed mask. Values outside
    /// [-1, 1] are rejected.
    void set_weight(ConceptId x, ConceptId y, Scalar value) {
        check_edge(x, y);
        if (!(value >= Scalar(-1) && value <= Scalar(1))) {
            throw std::invalid_argument("BeliefNetwork: weight outside [-1, 1]");
        }
        weights_(x, y) = value;
        weights_(y, x) = value;
    }

    /// Writes a weight and marks the edge immutable.
    void fix(ConceptId x, ConceptId y, Scalar value) {
        set_weight(x, y, value);
        fixed_(x, y) = true;
        fixed_(y, x) = true;
    }

    void check_edge(ConceptId x, ConceptId y) const {
        check_concept(x);
        check_concept(y);
        if (x == y) {
            throw std::invalid_argument("BeliefNetwork: self-edge (" + std::to_string(x) + ")");
        }
    }

    void check_concept(ConceptId x) const {
        if (x < 0 || x >= size()) {
            throw std::invalid_argument("BeliefNetwork: concept id " + std::to_string(x) +
                                        " out of range");
        }
    }

    friend bool operator==(const BeliefNetwork& a, const BeliefNetwork& b) {
        return a.size() == b.size() && a.weights_ == b.weights_ && a.fixed_ == b.fixed_;
    }

private:
    Matrix weights_;
    Mask fixed_;
};

/// Energy of one triad: minus the product of its three edges.
template <typename Scalar>
Scalar triad_energy(const BeliefNetwork<Scalar>& net, ConceptId x, ConceptId y, ConceptId z) {
    net.check_edge(x, y);
    net.check_edge(x, z);
    net.check_edge(y, z);
    return -net(x, y) * net(x, z) * net(y, z);
}

/// Mean triad energy. With a zero diagonal, trace(W^3) counts every unordered
/// triad six times.
template <typename Scalar>
Scalar dissonance(const BeliefNetwork<Scalar>& net) {
    const auto n_triads = triad_count(net.size());
    if (n_triads == 0) {
        throw std::domain_error("dissonance: network needs at least 3 concepts");
    }
    const auto& w = net.weights();
    const Scalar cubed_trace = ((w * w).cwiseProduct(w)).sum();
    return -cubed_trace / (Scalar(6) * Scalar(n_triads));
}

/// Partial derivative of dissonance with respect to b(x, y):
/// -(1/|T|) * sum_z b(x,z) b(y,z). The zero diagonal drops z = x and z = y.
template <typename Scalar>
Scalar dissonance_gradient(const BeliefNetwork<Scalar>& net, ConceptId x, ConceptId y) {
    net.check_edge(x, y);
    const auto n_triads = triad_count(net.size());
    if (n_triads == 0) {
        return Scalar(0);
    }
    const auto& w = net.weights();
    return -w.row(x).dot(w.row(y)) / Scalar(n_triads);
}

/// Adds delta to b(x, y) and clips into [-1, 1]. Fixed edges are left as they
/// are. Returns the weight after the update.
template <typename Scalar>
Scalar set_belief_clipped(BeliefNetwork<Scalar>& net, ConceptId x, ConceptId y, Scalar delta) {
    net.check_edge(x, y);
    if (net.is_fixed(x, y)) {
        return net(x, y);
    }
    const Scalar updated = std::clamp(net(x, y) + delta, Scalar(-1), Scalar(1));
    net.set_weight(x, y, updated);
    return updated;
}

}  // namespace beliefsim
