#pragma once

#include "coordkit/dataset.hpp"
#include "coordkit/signal.hpp"

#include <Eigen/Dense>

#include <span>
#include <utility>
#include <vector>

namespace coordkit {

struct WarpingPath {
    // Index pairs (into a, into b), from (0, 0) to (len_a - 1, len_b - 1).
    std::vector<std::pair<std::size_t, std::size_t>> steps;
    double cost = 0.0;
};

// Dynamic time warping with Euclidean local cost and the step set
// {(1,0), (0,1), (1,1)}. Rows of `a` and `b` are samples, columns features.
// Ties in the backtrack prefer the diagonal, then the step in `a`.
WarpingPath time_align_dtw(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);
WarpingPath time_align_dtw(std::span<const double> a, std::span<const double> b);

/// Warps `rep` onto the time axis of `reference`. Both are first linearly
/// normalized onto `grid`; every reference sample then takes the mean of the
/// rep samples the DTW path matches to it.
Repetition align_to_reference_dtw(const Repetition& rep, const Repetition& reference,
                                  const NormalizedGrid& grid);

}  // namespace coordkit
