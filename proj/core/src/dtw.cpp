#include "coordkit/dtw.hpp"

#include "coordkit/error.hpp"

#include <algorithm>
#include <limits>

namespace coordkit {

WarpingPath time_align_dtw(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (a.rows() < 2 || b.rows() < 2) throw ParameterError("time_align_dtw: series need length >= 2");
    if (a.cols() != b.cols()) throw ParameterError("time_align_dtw: feature count mismatch");

    const Eigen::Index na = a.rows();
    const Eigen::Index nb = b.rows();
    constexpr double inf = std::numeric_limits<double>::infinity();
    Eigen::MatrixXd acc = Eigen::MatrixXd::Constant(na, nb, inf);

    for (Eigen::Index i = 0; i < na; ++i) {
        for (Eigen::Index j = 0; j < nb; ++j) {
            const double local = (a.row(i) - b.row(j)).norm();
            if (i == 0 && j == 0) {
                acc(i, j) = local;
                continue;
            }
            double best = inf;
            if (i > 0 && j > 0) best = acc(i - 1, j - 1);
            if (i > 0) best = std::min(best, acc(i - 1, j));
            if (j > 0) best = std::min(best, acc(i, j - 1));
            acc(i, j) = local + best;
        }
    }

    WarpingPath path;
    path.cost = acc(na - 1, nb - 1);
    Eigen::Index i = na - 1;
    Eigen::Index j = nb - 1;
    path.steps.emplace_back(i, j);
    while (i > 0 || j > 0) {
        if (i == 0) {
            --j;
        } else if (j == 0) {
            --i;
        } else {
            const double diag = acc(i - 1, j - 1);
            const double up = acc(i - 1, j);
            const double left = acc(i, j - 1);
            if (diag <= up && diag <= left) {
                --i;
                --j;
            } else if (up <= left) {
                --i;
            } else {
                --j;
            }
        }
        path.steps.emplace_back(i, j);
    }
    std::reverse(path.steps.begin(), path.steps.end());
    return path;
}

WarpingPath time_align_dtw(std::span<const double> a, std::span<const double> b) {
    Eigen::Map<const Eigen::VectorXd> ma(a.data(), static_cast<Eigen::Index>(a.size()));
    Eigen::Map<const Eigen::VectorXd> mb(b.data(), static_cast<Eigen::Index>(b.size()));
    return time_align_dtw(Eigen::MatrixXd(ma), Eigen::MatrixXd(mb));
}

Repetition align_to_reference_dtw(const Repetition& rep, const Repetition& reference,
                                  const NormalizedGrid& grid) {
    if (rep.joints() != reference.joints()) {
        throw ParameterError("align_to_reference_dtw: joint count mismatch");
    }
    const auto moving = time_normalize_linear(rep, grid);
    const auto target = time_normalize_linear(reference, grid);
    const auto path = time_align_dtw(target.angles(), moving.angles());

    const auto g = static_cast<Eigen::Index>(grid.size());
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(g, rep.joints());
    Eigen::VectorXd count = Eigen::VectorXd::Zero(g);
    for (auto [ti, mi] : path.steps) {
        sum.row(static_cast<Eigen::Index>(ti)) += moving.angles().row(static_cast<Eigen::Index>(mi));
        count(static_cast<Eigen::Index>(ti)) += 1.0;
    }
    // The path visits every reference index at least once.
    for (Eigen::Index r = 0; r < g; ++r) sum.row(r) /= count(r);
    return Repetition(grid.points(), std::move(sum));
}

}  // namespace coordkit
