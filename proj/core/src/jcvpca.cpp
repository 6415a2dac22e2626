#include "coordkit/jcvpca.hpp"

#include "coordkit/error.hpp"

#include <cmath>

namespace coordkit {

JrwMatrices compute_jrw(const Dataset& a, const Dataset& b, Eigen::Index m) {
    require_compatible(a, b);

    JrwMatrices out;
    out.model_a = fit_pca(a, m);
    const Eigen::MatrixXd scores = project(b.concatenated(), out.model_a);
    out.model_b_projected = fit_pca(scores, m);

    out.signed_b = out.model_b_projected.components * out.model_a.components;
    out.jrw_a = out.model_a.components.cwiseAbs();
    out.jrw_b = out.signed_b.cwiseAbs();
    out.explained_variance_a = out.model_a.explained_variance_ratio;
    out.explained_variance_b = out.model_b_projected.explained_variance_ratio;
    return out;
}

JcvPcaResult compute_jcvpca(const Dataset& a, const Dataset& b, const JcvPcaOptions& options) {
    const auto n = static_cast<Eigen::Index>(a.joint_count());
    if (options.p < 1) throw ParameterError("task dimensionality p must be >= 1");
    if (options.m < options.p || options.m > n) {
        throw ParameterError("m = " + std::to_string(options.m) + " must satisfy p <= m <= n (p = " +
                             std::to_string(options.p) + ", n = " + std::to_string(n) + ")");
    }

    JcvPcaResult result;
    result.jrw = compute_jrw(a, b, options.m);
    result.delta = result.jrw.jrw_b - result.jrw.jrw_a;
    if (options.weighted) {
        result.weighted_delta =
            result.jrw.explained_variance_a.asDiagonal() * result.delta;
    }
    result.reference_name = a.name();
    result.comparison_name = b.name();
    result.joints = a.joints();
    result.m = options.m;
    result.p = options.p;
    for (const auto& w : result.jrw.model_a.warnings) result.warnings.push_back("reference PCA: " + w);
    for (const auto& w : result.jrw.model_b_projected.warnings)
        result.warnings.push_back("comparison PCA: " + w);
    return result;
}

RowSelection select_rows(const JcvPcaResult& result, RowFocus focus) {
    RowSelection sel;
    const Eigen::Index first = focus == RowFocus::task ? 0 : result.p;
    const Eigen::Index last = focus == RowFocus::task ? result.p : result.m;
    for (Eigen::Index u = first; u < last; ++u) sel.rows.push_back(u);
    sel.values = result.delta.middleRows(first, last - first);
    if (sel.rows.empty()) {
        sel.warning = focus == RowFocus::null_space ? "m == p: no null-space components retained"
                                                    : "p == 0: no task components";
    }
    return sel;
}

int percent_change(double delta) {
    return static_cast<int>(std::lround(delta * 100.0));
}

}  // namespace coordkit
