#pragma once

#include "coordkit/crp.hpp"
#include "coordkit/dataset.hpp"

#include <span>
#include <string>
#include <vector>

namespace coordkit {

// Composite trapezoidal rule on ascending abscissae.
double trapezoid(std::span<const double> x, std::span<const double> y);

/// Area between the mean CRP curves of two datasets for one joint pair.
/// `area` integrates over normalized time [0, 1] (deg x normalized time);
/// `area_percent` integrates the same profile over 0-100 %.
struct JsvCrpResult {
    std::size_t first = 0;
    std::size_t second = 1;
    double area = 0.0;
    double area_percent = 0.0;
    CrpCurve curve_a;
    CrpCurve curve_b;
    std::vector<double> difference_profile;  // |CRP_B - CRP_A|, degrees
    std::vector<std::string> flags;

    double area_radians() const;
};

// Area between two curves sampled on the same grid.
JsvCrpResult jsvcrp_from_curves(CrpCurve curve_a, CrpCurve curve_b);

JsvCrpResult jsvcrp(const Dataset& a, const Dataset& b, std::size_t i, std::size_t j,
                    const NormalizedGrid& grid, const CrpOptions& options = {});

/// One result per unordered pair (i < j), in lexicographic order.
std::vector<JsvCrpResult> jsvcrp_all_pairs(const Dataset& a, const Dataset& b,
                                           const NormalizedGrid& grid, const CrpOptions& options = {});

}  // namespace coordkit
