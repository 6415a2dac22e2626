#include "coordkit/crp.hpp"

#include "coordkit/dtw.hpp"
#include "coordkit/error.hpp"
#include "coordkit/numfmt.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

namespace coordkit {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;

double endpoint_weighted_l1(std::span<const double> values, std::span<const double> anchor, double shift) {
    double sum = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) {
        const double w = (k == 0 || k + 1 == values.size()) ? 0.5 : 1.0;
        sum += w * std::abs(values[k] + shift - anchor[k]);
    }
    return sum;
}

}  // namespace

double branch_shift(std::span<const double> values, std::span<const double> anchor) {
    if (values.size() != anchor.size()) throw ParameterError("branch_shift: curve lengths differ");
    if (values.empty()) return 0.0;
    double mean_gap = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) mean_gap += anchor[k] - values[k];
    mean_gap /= static_cast<double>(values.size());
    const double centre = 360.0 * std::round(mean_gap / 360.0);
    double best = centre;
    double best_cost = endpoint_weighted_l1(values, anchor, centre);
    for (double candidate : {centre - 360.0, centre + 360.0}) {
        const double cost = endpoint_weighted_l1(values, anchor, candidate);
        if (cost < best_cost) {
            best = candidate;
            best_cost = cost;
        }
    }
    return best;
}

std::vector<double> unwrap_phase(std::span<const double> wrapped) {
    std::vector<double> out(wrapped.begin(), wrapped.end());
    for (std::size_t k = 1; k < out.size(); ++k) {
        double d = wrapped[k] - wrapped[k - 1];
        d -= 2.0 * kPi * std::floor((d + kPi) / (2.0 * kPi));
        out[k] = out[k - 1] + d;
    }
    return out;
}

PhaseAngleSeries phase_angle(std::span<const double> theta_norm, std::span<const double> vel_norm) {
    if (theta_norm.size() != vel_norm.size()) {
        throw ParameterError("phase_angle: position and velocity lengths differ");
    }
    PhaseAngleSeries out;
    std::vector<double> wrapped(theta_norm.size());
    double previous = 0.0;
    for (std::size_t k = 0; k < wrapped.size(); ++k) {
        if (theta_norm[k] == 0.0 && vel_norm[k] == 0.0) {
            wrapped[k] = previous;
            ++out.degenerate_samples;
        } else {
            wrapped[k] = std::atan2(vel_norm[k], theta_norm[k]);
        }
        previous = wrapped[k];
    }
    out.phi = unwrap_phase(wrapped);
    return out;
}

bool joint_phase(const Repetition& on_grid, Eigen::Index joint, const VelocityOptions& velocity,
                 PhaseAngleSeries& out, std::vector<std::string>& flags) {
    const auto position = on_grid.joint(joint);
    const std::size_t g = position.size();

    std::vector<double> pos_norm;
    try {
        pos_norm = range_normalize(position);
    } catch (const DegenerateRange&) {
        flags.push_back("joint " + std::to_string(joint) +
                        ": zero range of motion, phase set to constant 0");
        out.phi.assign(g, 0.0);
        out.degenerate_samples = g;
        return false;
    }

    auto series = position;
    if (velocity.smoothing_window > 1) series = moving_average(series, velocity.smoothing_window);
    const auto vel = differentiate(on_grid.time(), series, velocity.method);
    std::vector<double> vel_norm;
    try {
        vel_norm = range_normalize(vel);
    } catch (const DegenerateRange&) {
        flags.push_back("joint " + std::to_string(joint) +
                        ": zero velocity range, normalized velocity set to 0");
        vel_norm.assign(g, 0.0);
    }
    out = phase_angle(pos_norm, vel_norm);
    if (out.degenerate_samples > 0) {
        flags.push_back("joint " + std::to_string(joint) + ": " +
                        std::to_string(out.degenerate_samples) +
                        " samples at the phase-portrait origin");
    }
    return true;
}

namespace {

CrpCurve crp_on_grid(const Repetition& on_grid, std::size_t i, std::size_t j,
                     const NormalizedGrid& grid, const VelocityOptions& velocity) {
    CrpCurve curve{i, j, grid, {}, 1, {}};
    PhaseAngleSeries phi_i;
    PhaseAngleSeries phi_j;
    const bool moving_i = joint_phase(on_grid, static_cast<Eigen::Index>(i), velocity, phi_i, curve.flags);
    const bool moving_j = joint_phase(on_grid, static_cast<Eigen::Index>(j), velocity, phi_j, curve.flags);
    if (!moving_i && !moving_j) {
        throw ComputationError("crp_pair: joints " + std::to_string(i) + " and " +
                               std::to_string(j) + " both have zero range of motion");
    }
    curve.values.resize(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        curve.values[k] = (phi_i.phi[k] - phi_j.phi[k]) * kRadToDeg;
    }
    return curve;
}

void check_pair(std::size_t i, std::size_t j, Eigen::Index joints) {
    if (i == j) throw ParameterError("CRP needs two distinct joints");
    const auto n = static_cast<std::size_t>(joints);
    if (i >= n || j >= n) throw ParameterError("CRP joint index out of range");
}

}  // namespace

CrpCurve crp_pair(const Repetition& rep, std::size_t i, std::size_t j, const NormalizedGrid& grid,
                  const CrpOptions& options) {
    check_pair(i, j, rep.joints());
    return crp_on_grid(time_normalize_linear(rep, grid), i, j, grid, options.velocity);
}

CrpCurve mean_crp(const Dataset& ds, std::size_t i, std::size_t j, const NormalizedGrid& grid,
                  const CrpOptions& options) {
    check_pair(i, j, static_cast<Eigen::Index>(ds.joint_count()));

    CrpCurve mean{i, j, grid, std::vector<double>(grid.size(), 0.0), ds.rep_count(), {}};
    const auto& reps = ds.reps();
    std::vector<double> anchor;
    for (std::size_t r = 0; r < reps.size(); ++r) {
        CrpCurve curve;
        try {
            const auto on_grid = options.alignment == TimeAlignment::dtw
                                     ? align_to_reference_dtw(reps[r], reps.front(), grid)
                                     : time_normalize_linear(reps[r], grid);
            curve = crp_on_grid(on_grid, i, j, grid, options.velocity);
        } catch (const Error& e) {
            throw ComputationError("dataset '" + ds.name() + "', repetition " + std::to_string(r) +
                                   ": " + e.what());
        }
        if (r == 0) {
            anchor = curve.values;
        } else if (const double shift = branch_shift(curve.values, anchor); shift != 0.0) {
            for (auto& v : curve.values) v += shift;
            curve.flags.push_back("shifted by " + format_double(shift) + " deg onto the first repetition's branch");
        }
        for (std::size_t k = 0; k < grid.size(); ++k) mean.values[k] += curve.values[k];
        for (auto& f : curve.flags) mean.flags.push_back("rep " + std::to_string(r) + ": " + f);
    }
    const auto k = static_cast<double>(reps.size());
    for (auto& v : mean.values) v /= k;
    return mean;
}

NoiseRatio noise_ratio_guard(const Repetition& rep, Eigen::Index joint, double noise_estimate) {
    if (!(noise_estimate >= 0.0)) throw ParameterError("noise estimate must be >= 0");
    if (joint < 0 || joint >= rep.joints()) throw ParameterError("joint index out of range");
    const auto col = rep.angles().col(joint);
    const double range = col.maxCoeff() - col.minCoeff();
    NoiseRatio out;
    if (!(range > 0.0)) {
        out.ratio = std::numeric_limits<double>::infinity();
        out.degenerate = true;
        out.not_meaningful = true;
        return out;
    }
    out.ratio = noise_estimate / range;
    out.not_meaningful = out.ratio > 1.0;
    return out;
}

void write_crp_curve_csv(const std::filesystem::path& file, const CrpCurve& curve) {
    std::ostringstream out;
    out << "percent,crp_deg\n";
    const auto pct = curve.grid.percent();
    for (std::size_t k = 0; k < curve.values.size(); ++k) {
        out << format_double(pct[k]) << ',' << format_double(curve.values[k]) << '\n';
    }
    std::ofstream f(file, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write " + file.string());
    f << out.str();
}

nlohmann::json crp_curve_metadata(const CrpCurve& curve, std::span<const std::string> joints) {
    nlohmann::json pair = {curve.first, curve.second};
    nlohmann::json names = nlohmann::json::array();
    if (curve.first < joints.size() && curve.second < joints.size()) {
        names = {joints[curve.first], joints[curve.second]};
    }
    return {
        {"pair", pair},
        {"joints", names},
        {"n_reps", curve.n_reps_averaged},
        {"grid_size", curve.grid.size()},
        {"unit", "deg"},
        {"sign", "phi_first - phi_second; positive when the second joint leads"},
        {"flags", curve.flags},
    };
}

}  // namespace coordkit
