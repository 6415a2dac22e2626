#pragma once

#include "coordkit/dataset.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace coordkit {

enum class DiffMethod { central_difference, forward_difference };

struct VelocityOptions {
    DiffMethod method = DiffMethod::central_difference;
    // Centered moving-average window applied to positions before
    // differentiating. 1 disables smoothing; must be odd.
    int smoothing_window = 1;
};

struct VelocityProfile {
    std::vector<double> time;
    Eigen::MatrixXd velocities;  // T x n, angle unit per second
};

/// Numerical derivative of `values` w.r.t. `time`. Central differences use the
/// non-uniform three-point formula at interior samples; endpoints are
/// one-sided. Sample count is preserved.
std::vector<double> differentiate(std::span<const double> time, std::span<const double> values,
                                  DiffMethod method = DiffMethod::central_difference);

std::vector<double> moving_average(std::span<const double> values, int window);

VelocityProfile compute_velocity(const Repetition& rep, const VelocityOptions& options = {});

/// Affine map of the series onto [-1, 1] using its own min and max.
/// Throws DegenerateRange when the series is constant.
std::vector<double> range_normalize(std::span<const double> series);

/// Uniform normalized time grid on [0, 1] (reported as 0-100 %).
class NormalizedGrid {
public:
    static constexpr std::size_t kDefaultSize = 101;
    static constexpr std::size_t kMinSize = 11;

    explicit NormalizedGrid(std::size_t size = kDefaultSize);

    std::size_t size() const { return points_.size(); }
    const std::vector<double>& points() const { return points_; }
    double step() const { return 1.0 / static_cast<double>(points_.size() - 1); }
    std::vector<double> percent() const;

    bool operator==(const NormalizedGrid& other) const { return size() == other.size(); }

private:
    std::vector<double> points_;
};

// Linear interpolation of (x, y) at the sorted query points `xq`. `x` must be
// strictly increasing; queries outside [x.front(), x.back()] clamp.
std::vector<double> interpolate_linear(std::span<const double> x, std::span<const double> y,
                                       std::span<const double> xq);

/// Maps time onto [0, 1] via (t - t0) / (t_end - t0) and resamples every joint
/// onto `grid` by linear interpolation. The returned repetition's time axis is
/// the grid itself.
Repetition time_normalize_linear(const Repetition& rep, const NormalizedGrid& grid);

}  // namespace coordkit
