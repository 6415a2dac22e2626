#pragma once

#include "coordkit/dataset.hpp"
#include "coordkit/signal.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace coordkit {

struct PhaseAngleSeries {
    std::vector<double> phi;  // radians, unwrapped
    // Samples where position and velocity were both exactly zero; the angle
    // was carried forward from the previous sample.
    std::size_t degenerate_samples = 0;
};

/// Angle of each (position, velocity) point of a range-normalized phase
/// portrait, via atan2(velocity, position), unwrapped along time.
PhaseAngleSeries phase_angle(std::span<const double> theta_norm, std::span<const double> vel_norm);

// Adds multiples of 2*pi so consecutive samples never differ by more than pi.
std::vector<double> unwrap_phase(std::span<const double> wrapped);

enum class TimeAlignment { linear, dtw };

struct CrpOptions {
    VelocityOptions velocity{};
    TimeAlignment alignment = TimeAlignment::linear;
};

/// Continuous relative phase of the ordered joint pair (first, second), in
/// degrees over a normalized grid. Positive values mean the second joint
/// leads the first.
struct CrpCurve {
    std::size_t first = 0;
    std::size_t second = 1;
    NormalizedGrid grid;
    std::vector<double> values;  // degrees
    std::size_t n_reps_averaged = 1;
    std::vector<std::string> flags;
};

// Phase of one joint of a repetition already sampled on `grid`. Applies the
// constant-zero policy on zero range; `flags` receives a note when it does.
// Returns false when the joint's position range was zero.
bool joint_phase(const Repetition& on_grid, Eigen::Index joint, const VelocityOptions& velocity,
                 PhaseAngleSeries& out, std::vector<std::string>& flags);

/// time-normalize -> differentiate -> range-normalize -> phase -> phi_i - phi_j.
CrpCurve crp_pair(const Repetition& rep, std::size_t i, std::size_t j, const NormalizedGrid& grid,
                  const CrpOptions& options = {});

// Multiple of 360 deg that, added to `values`, minimizes the trapezoid L1
// distance to `anchor`. Two CRP curves a whole turn apart describe the same
// coordination; which turn a curve lands on depends on where atan2 starts it.
double branch_shift(std::span<const double> values, std::span<const double> anchor);

/// Pointwise mean of crp_pair over every repetition, summed in repetition
/// order. Each repetition is moved onto the first one's branch (branch_shift)
/// before summing. With TimeAlignment::dtw each repetition is first warped
/// onto the first repetition.
CrpCurve mean_crp(const Dataset& ds, std::size_t i, std::size_t j, const NormalizedGrid& grid,
                  const CrpOptions& options = {});

struct NoiseRatio {
    double ratio = 0.0;  // +inf for a constant joint
    bool not_meaningful = false;
    bool degenerate = false;
};

// noise / (max - min) for one joint; above 1 the joint's CRP carries no
// usable phase information.
NoiseRatio noise_ratio_guard(const Repetition& rep, Eigen::Index joint, double noise_estimate);

// Columns percent,crp_deg; one row per grid point.
void write_crp_curve_csv(const std::filesystem::path& file, const CrpCurve& curve);
nlohmann::json crp_curve_metadata(const CrpCurve& curve, std::span<const std::string> joints);

}  // namespace coordkit
