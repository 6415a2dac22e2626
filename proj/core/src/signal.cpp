#include "coordkit/signal.hpp"

#include "coordkit/error.hpp"

#include <algorithm>
#include <cmath>

namespace coordkit {

std::vector<double> differentiate(std::span<const double> time, std::span<const double> values,
                                  DiffMethod method) {
    const std::size_t n = values.size();
    if (time.size() != n) throw ParameterError("differentiate: time and values differ in length");
    if (n < 3) throw ParameterError("differentiate: need at least 3 samples");
    for (std::size_t i = 1; i < n; ++i) {
        if (!(time[i] - time[i - 1] > 0.0)) {
            throw ValidationError("differentiate: zero or negative time step at sample " +
                                  std::to_string(i));
        }
    }

    std::vector<double> out(n);
    if (method == DiffMethod::forward_difference) {
        for (std::size_t i = 0; i + 1 < n; ++i)
            out[i] = (values[i + 1] - values[i]) / (time[i + 1] - time[i]);
        out[n - 1] = (values[n - 1] - values[n - 2]) / (time[n - 1] - time[n - 2]);
        return out;
    }

    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h1 = time[i] - time[i - 1];
        const double h2 = time[i + 1] - time[i];
        out[i] = (h1 * h1 * values[i + 1] - h2 * h2 * values[i - 1] + (h2 * h2 - h1 * h1) * values[i]) /
                 (h1 * h2 * (h1 + h2));
    }
    // Second-order one-sided stencils at both ends.
    {
        const double h1 = time[1] - time[0];
        const double h2 = time[2] - time[1];
        out[0] = -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * values[0] + (h1 + h2) / (h1 * h2) * values[1] -
                 h1 / (h2 * (h1 + h2)) * values[2];
    }
    {
        const double h1 = time[n - 1] - time[n - 2];
        const double h2 = time[n - 2] - time[n - 3];
        out[n - 1] = (2.0 * h1 + h2) / (h1 * (h1 + h2)) * values[n - 1] -
                     (h1 + h2) / (h1 * h2) * values[n - 2] + h1 / (h2 * (h1 + h2)) * values[n - 3];
    }
    return out;
}

std::vector<double> moving_average(std::span<const double> values, int window) {
    if (window < 1 || window % 2 == 0) {
        throw ParameterError("moving_average: window must be a positive odd number");
    }
    const auto n = static_cast<std::ptrdiff_t>(values.size());
    const std::ptrdiff_t half = window / 2;
    std::vector<double> out(values.size());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        // Shrink symmetrically near the edges so the endpoints stay put.
        const std::ptrdiff_t h = std::min({half, i, n - 1 - i});
        double sum = 0.0;
        for (std::ptrdiff_t k = i - h; k <= i + h; ++k) sum += values[static_cast<std::size_t>(k)];
        out[static_cast<std::size_t>(i)] = sum / static_cast<double>(2 * h + 1);
    }
    return out;
}

VelocityProfile compute_velocity(const Repetition& rep, const VelocityOptions& options) {
    VelocityProfile profile{rep.time(), Eigen::MatrixXd(rep.samples(), rep.joints())};
    for (Eigen::Index j = 0; j < rep.joints(); ++j) {
        auto series = rep.joint(j);
        if (options.smoothing_window > 1) series = moving_average(series, options.smoothing_window);
        auto v = differentiate(rep.time(), series, options.method);
        profile.velocities.col(j) = Eigen::Map<const Eigen::VectorXd>(v.data(), rep.samples());
    }
    return profile;
}

std::vector<double> range_normalize(std::span<const double> series) {
    if (series.empty()) throw ParameterError("range_normalize: empty series");
    const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
    const double min = *lo;
    const double range = *hi - min;
    if (!(range > 0.0)) throw DegenerateRange("range_normalize: series has zero range");
    std::vector<double> out(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        out[i] = std::clamp(2.0 * (series[i] - min) / range - 1.0, -1.0, 1.0);
    }
    return out;
}

NormalizedGrid::NormalizedGrid(std::size_t size) {
    if (size < kMinSize) {
        throw ParameterError("normalized grid needs at least " + std::to_string(kMinSize) +
                             " points, got " + std::to_string(size));
    }
    points_.resize(size);
    const double last = static_cast<double>(size - 1);
    for (std::size_t i = 0; i < size; ++i) points_[i] = static_cast<double>(i) / last;
}

std::vector<double> NormalizedGrid::percent() const {
    std::vector<double> out(points_.size());
    const double last = static_cast<double>(points_.size() - 1);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = 100.0 * static_cast<double>(i) / last;
    return out;
}

std::vector<double> interpolate_linear(std::span<const double> x, std::span<const double> y,
                                       std::span<const double> xq) {
    if (x.size() != y.size() || x.size() < 2) {
        throw ParameterError("interpolate_linear: need matching x/y with at least 2 points");
    }
    std::vector<double> out(xq.size());
    for (std::size_t q = 0; q < xq.size(); ++q) {
        const double v = xq[q];
        if (v <= x.front()) {
            out[q] = y.front();
        } else if (v >= x.back()) {
            out[q] = y.back();
        } else {
            const auto hi = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), v) - x.begin());
            const std::size_t lo = hi - 1;
            const double w = (v - x[lo]) / (x[hi] - x[lo]);
            out[q] = y[lo] + w * (y[hi] - y[lo]);
        }
    }
    return out;
}

Repetition time_normalize_linear(const Repetition& rep, const NormalizedGrid& grid) {
    const auto& t = rep.time();
    const double t0 = t.front();
    const double span = t.back() - t0;
    if (!(span > 0.0)) throw ValidationError("time_normalize_linear: zero-duration repetition");

    std::vector<double> s(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) s[i] = (t[i] - t0) / span;
    s.back() = 1.0;

    const auto& q = grid.points();
    Eigen::MatrixXd out(static_cast<Eigen::Index>(q.size()), rep.joints());
    for (Eigen::Index j = 0; j < rep.joints(); ++j) {
        auto series = rep.joint(j);
        auto resampled = interpolate_linear(s, series, q);
        out.col(j) = Eigen::Map<const Eigen::VectorXd>(resampled.data(), out.rows());
    }
    return Repetition(q, std::move(out));
}

}  // namespace coordkit
