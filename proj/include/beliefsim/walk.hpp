#pragma once

#include "beliefsim/belief_net.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <span>
#include <stdexcept>

namespace beliefsim {

template <typename Scalar>
struct WalkDistribution {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> probability;  // indexed by ConceptId
    bool uniform_fallback = false;
};

/// Exact destination distribution of a two-step walk started at `source`.
///
/// Each step moves along an incident edge with probability proportional to
/// |weight|. The second step may not go back to the source. Destinations in
/// `excluded` get zero mass and the rest is renormalized. A walk that stalls
/// at an intermediate concept whose remaining edges are all exactly zero
/// contributes nothing. The source itself is never a destination. When no mass
/// survives, the result is uniform over the remaining concepts and flagged.
template <typename Scalar>
WalkDistribution<Scalar> two_step_walk_distribution(const BeliefNetwork<Scalar>& net,
                                                    ConceptId source,
                                                    std::span<const ConceptId> excluded) {
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    net.check_concept(source);
    const Eigen::Index n = net.size();

    auto is_allowed = [&](Eigen::Index c) {
        return c != source && std::find(excluded.begin(), excluded.end(), c) == excluded.end();
    };
    for (ConceptId c : excluded) {
        net.check_concept(c);
    }
    Eigen::Index n_allowed = 0;
    for (Eigen::Index c = 0; c < n; ++c) {
        n_allowed += is_allowed(c);
    }
    if (n_allowed == 0) {
        throw std::domain_error("two_step_walk_distribution: every destination is excluded");
    }

    WalkDistribution<Scalar> out;
    out.probability = Vector::Zero(n);

    using Matrix = typename BeliefNetwork<Scalar>::Matrix;
    const Matrix abs_w = net.weights().cwiseAbs();
    const Vector degree = abs_w.rowwise().sum();
    if (degree(source) > Scalar(0)) {
        for (Eigen::Index mid = 0; mid < n; ++mid) {
            const Scalar first = abs_w(source, mid);
            if (mid == source || first == Scalar(0)) {
                continue;
            }
            const Scalar second_total = degree(mid) - abs_w(mid, source);
            if (second_total <= Scalar(0)) {
                continue;
            }
            // abs_w is symmetric, so column mid holds the second-step weights.
            out.probability += (first / (degree(source) * second_total)) * abs_w.col(mid);
        }
    }
    for (Eigen::Index c = 0; c < n; ++c) {
        if (!is_allowed(c)) {
            out.probability(c) = Scalar(0);
        }
    }

    const Scalar total = out.probability.sum();
    if (total > Scalar(0)) {
        out.probability /= total;
    } else {
        out.uniform_fallback = true;
        for (Eigen::Index c = 0; c < n; ++c) {
            out.probability(c) = is_allowed(c) ? Scalar(1) / Scalar(n_allowed) : Scalar(0);
        }
    }
    return out;
}

}  // namespace beliefsim
