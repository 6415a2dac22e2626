#pragma once

#include "coordkit/dataset.hpp"

#include <cstdint>
#include <numbers>
#include <utility>

namespace coordkit {

/// Two-joint sine datasets. Both share theta1 = a1 sin(w t); the second joint
/// has twice the amplitude and leads by `phase_a` (dataset A) or `phase_b`
/// (dataset B).
struct SimConfig {
    double amplitude = 1.0;
    double angular_frequency = 2.0 * std::numbers::pi;  // rad/s
    double duration = 1.0;                              // s
    std::size_t samples = 1000;
    double noise_sigma = 0.0;
    std::size_t repetitions = 1;
    std::uint64_t seed = 0;
    double phase_a = 1.0;
    double phase_b = std::numbers::pi / 2.0;
    AngleUnit unit = AngleUnit::rad;

    // Throws ConfigError.
    void validate() const;
};

struct SimulatedPair {
    Dataset a;
    Dataset b;
};

SimulatedPair generate_simulated(const SimConfig& config);

}  // namespace coordkit
