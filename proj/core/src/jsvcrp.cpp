#include "coordkit/jsvcrp.hpp"

#include "coordkit/error.hpp"
#include "coordkit/numfmt.hpp"

#include <cmath>
#include <numbers>

namespace coordkit {

double trapezoid(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ParameterError("trapezoid: x and y differ in length");
    double sum = 0.0;
    for (std::size_t k = 1; k < x.size(); ++k) sum += 0.5 * (x[k] - x[k - 1]) * (y[k] + y[k - 1]);
    return sum;
}

double JsvCrpResult::area_radians() const {
    return area * std::numbers::pi / 180.0;
}

JsvCrpResult jsvcrp_from_curves(CrpCurve curve_a, CrpCurve curve_b) {
    if (!(curve_a.grid == curve_b.grid) || curve_a.values.size() != curve_b.values.size()) {
        throw ParameterError("jsvcrp: CRP curves live on different grids");
    }
    if (const double shift = branch_shift(curve_b.values, curve_a.values); shift != 0.0) {
        for (auto& v : curve_b.values) v += shift;
        curve_b.flags.push_back("shifted by " + format_double(shift) + " deg onto the reference branch");
    }
    JsvCrpResult out;
    out.first = curve_a.first;
    out.second = curve_a.second;
    out.difference_profile.resize(curve_a.values.size());
    for (std::size_t k = 0; k < curve_a.values.size(); ++k) {
        out.difference_profile[k] = std::abs(curve_b.values[k] - curve_a.values[k]);
    }
    out.area = trapezoid(curve_a.grid.points(), out.difference_profile);
    out.area_percent = trapezoid(curve_a.grid.percent(), out.difference_profile);
    for (const auto& f : curve_a.flags) out.flags.push_back("A " + f);
    for (const auto& f : curve_b.flags) out.flags.push_back("B " + f);
    out.curve_a = std::move(curve_a);
    out.curve_b = std::move(curve_b);
    return out;
}

JsvCrpResult jsvcrp(const Dataset& a, const Dataset& b, std::size_t i, std::size_t j,
                    const NormalizedGrid& grid, const CrpOptions& options) {
    require_compatible(a, b);
    return jsvcrp_from_curves(mean_crp(a, i, j, grid, options), mean_crp(b, i, j, grid, options));
}

std::vector<JsvCrpResult> jsvcrp_all_pairs(const Dataset& a, const Dataset& b,
                                           const NormalizedGrid& grid, const CrpOptions& options) {
    require_compatible(a, b);
    const std::size_t n = a.joint_count();
    if (n < 2) throw ParameterError("jsvcrp_all_pairs: need at least 2 joints");
    std::vector<JsvCrpResult> out;
    out.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) out.push_back(jsvcrp(a, b, i, j, grid, options));
    return out;
}

}  // namespace coordkit
