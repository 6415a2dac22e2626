#include "coordkit/simulate.hpp"

#include "coordkit/error.hpp"

#include <cmath>
#include <random>

namespace coordkit {

void SimConfig::validate() const {
    if (!(amplitude > 0.0) || !std::isfinite(amplitude))
        throw ConfigError("simulation amplitude must be positive");
    if (!(angular_frequency > 0.0) || !std::isfinite(angular_frequency))
        throw ConfigError("simulation angular frequency must be positive");
    if (!(duration > 0.0) || !std::isfinite(duration))
        throw ConfigError("simulation duration must be positive");
    if (samples < 3) throw ConfigError("simulation needs at least 3 samples");
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma))
        throw ConfigError("simulation noise sigma must be >= 0");
    if (repetitions < 1) throw ConfigError("simulation needs at least one repetition");
}

SimulatedPair generate_simulated(const SimConfig& config) {
    config.validate();

    std::vector<double> time(config.samples);
    const double last = static_cast<double>(config.samples - 1);
    for (std::size_t i = 0; i < config.samples; ++i) {
        time[i] = config.duration * static_cast<double>(i) / last;
    }

    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> noise(0.0, config.noise_sigma > 0.0 ? config.noise_sigma : 1.0);

    auto make = [&](double phase) {
        std::vector<Repetition> reps;
        reps.reserve(config.repetitions);
        for (std::size_t r = 0; r < config.repetitions; ++r) {
            Eigen::MatrixXd angles(static_cast<Eigen::Index>(config.samples), 2);
            for (std::size_t i = 0; i < config.samples; ++i) {
                const double wt = config.angular_frequency * time[i];
                const auto row = static_cast<Eigen::Index>(i);
                angles(row, 0) = config.amplitude * std::sin(wt);
                angles(row, 1) = 2.0 * config.amplitude * std::sin(wt + phase);
            }
            if (config.noise_sigma > 0.0) {
                for (Eigen::Index c = 0; c < 2; ++c)
                    for (Eigen::Index i = 0; i < angles.rows(); ++i) angles(i, c) += noise(rng);
            }
            reps.emplace_back(time, std::move(angles));
        }
        return reps;
    };

    std::vector<std::string> joints{"theta1", "theta2"};
    Dataset a("sim_A", joints, make(config.phase_a), config.unit);
    Dataset b("sim_B", joints, make(config.phase_b), config.unit);
    return {std::move(a), std::move(b)};
}

}  // namespace coordkit
