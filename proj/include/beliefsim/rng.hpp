#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace beliefsim {

// SplitMix64 finalizer. Used to derive independent stream seeds from a base
// seed and a set of positional coordinates.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * UINT64_C(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)) * UINT64_C(0x94D049BB133111EB);
    return z ^ (z >> 31);
}

// Counter-style split: the result depends only on the base seed and the
// coordinates, never on the order in which streams are requested.
inline std::uint64_t derive_seed(std::uint64_t base,
                                 std::initializer_list<std::uint64_t> coords) {
    std::uint64_t h = mix64(base + UINT64_C(0x9E3779B97F4A7C15));
    for (std::uint64_t c : coords) {
        h = mix64(h ^ mix64(c + UINT64_C(0x9E3779B97F4A7C15)));
    }
    return h;
}

/// Random stream owned by exactly one run.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform integer in [0, n).
    std::size_t index(std::size_t n) {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
    }

    /// Uniform real in [0, 1).
    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

    double normal(double mean, double stddev) { return mean + stddev * std_normal_(engine_); }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> std_normal_{0.0, 1.0};
};

}  // namespace beliefsim
