#include "coordkit/pca.hpp"

#include "coordkit/error.hpp"
#include "json_util.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace coordkit {

namespace {

Eigen::Index argmax_abs(const Eigen::Ref<const Eigen::RowVectorXd>& row) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < row.size(); ++i) {
        if (std::abs(row(i)) > std::abs(row(best))) best = i;
    }
    return best;
}

}  // namespace

void apply_sign_convention(Eigen::Ref<Eigen::RowVectorXd> row) {
    if (row.size() == 0) return;
    if (row(argmax_abs(row)) < 0.0) row = -row;
}

SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& symmetric) {
    const Eigen::Index n = symmetric.rows();
    if (n != symmetric.cols() || n == 0) throw ParameterError("symmetric_eigen: matrix must be square");

    Eigen::MatrixXd a = 0.5 * (symmetric + symmetric.transpose());
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);

    const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-300);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (std::sqrt(off) <= 1e-15 * scale) break;

        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    const double tie = 1e-12 * scale;
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
        const double dx = a(x, x);
        const double dy = a(y, y);
        if (std::abs(dx - dy) > tie) return dx > dy;
        return argmax_abs(v.col(x).transpose()) < argmax_abs(v.col(y).transpose());
    });

    SymmetricEigen out{Eigen::VectorXd(n), Eigen::MatrixXd(n, n)};
    for (Eigen::Index k = 0; k < n; ++k) {
        const auto src = order[static_cast<std::size_t>(k)];
        out.values(k) = a(src, src);
        Eigen::RowVectorXd vec = v.col(src).transpose();
        vec.normalize();
        apply_sign_convention(vec);
        out.vectors.col(k) = vec.transpose();
    }
    return out;
}

PcaModel fit_pca(const Eigen::MatrixXd& samples, Eigen::Index m) {
    const Eigen::Index n = samples.cols();
    const Eigen::Index count = samples.rows();
    if (n < 1) throw ParameterError("fit_pca: no variables");
    if (m < 1 || m > n) {
        throw ParameterError("fit_pca: m = " + std::to_string(m) + " outside [1, " +
                             std::to_string(n) + "]");
    }
    if (count < 2) throw ParameterError("fit_pca: need at least 2 samples");

    PcaModel model;
    model.sample_count = count;
    model.mean = samples.colwise().mean().transpose();
    const Eigen::MatrixXd centered = samples.rowwise() - model.mean.transpose();
    const Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(count - 1);

    const auto eig = symmetric_eigen(cov);
    const Eigen::VectorXd lambda = eig.values.cwiseMax(0.0);
    const double total = lambda.sum();

    model.components = eig.vectors.leftCols(m).transpose();
    model.eigenvalues = lambda.head(m);
    model.explained_variance_ratio =
        total > 0.0 ? Eigen::VectorXd(lambda.head(m) / total) : Eigen::VectorXd::Zero(m);

    if (total <= 0.0) model.warnings.emplace_back("zero total variance: components are arbitrary");
    if (m < n) {
        const double kept = lambda(m - 1);
        const double dropped = lambda(m);
        if (kept - dropped <= kEigenTieTolerance * kept) {
            model.warnings.emplace_back("eigenvalue near-tie at component " + std::to_string(m) +
                                        ": retained basis is not unique");
        }
    }
    if (count < 10 * n) {
        model.warnings.emplace_back("only " + std::to_string(count) + " samples for " +
                                    std::to_string(n) + " variables (fewer than 10 per variable)");
    }
    return model;
}

PcaModel fit_pca(const Dataset& ds, Eigen::Index m) {
    return fit_pca(ds.concatenated(), m);
}

Eigen::MatrixXd project(const Eigen::MatrixXd& samples, const PcaModel& model) {
    if (samples.cols() != model.dimension()) {
        throw ParameterError("project: data has " + std::to_string(samples.cols()) +
                             " columns, model expects " + std::to_string(model.dimension()));
    }
    return (samples.rowwise() - model.mean.transpose()) * model.components.transpose();
}

Dataset project(const Dataset& ds, const PcaModel& model) {
    std::vector<Repetition> reps;
    reps.reserve(ds.rep_count());
    for (const auto& rep : ds.reps()) reps.emplace_back(rep.time(), project(rep.angles(), model));
    std::vector<std::string> names;
    for (Eigen::Index u = 0; u < model.retained(); ++u) names.push_back("PC" + std::to_string(u + 1));
    return Dataset(ds.name(), std::move(names), std::move(reps), ds.unit());
}

Eigen::MatrixXd inverse_project(const Eigen::MatrixXd& scores, const PcaModel& model) {
    if (scores.cols() != model.retained()) throw ParameterError("inverse_project: score width mismatch");
    return (scores * model.components).rowwise() + model.mean.transpose();
}

nlohmann::json to_json(const PcaModel& model) {
    using namespace detail;
    const auto rows = matrix_json(model.components);
    return {
        {"mean", vector_json(model.mean)},
        {"components", rows},
        {"eigenvalues", vector_json(model.eigenvalues)},
        {"explained_variance_ratio", vector_json(model.explained_variance_ratio)},
        {"sample_count", model.sample_count},
        {"warnings", model.warnings},
    };
}

PcaModel pca_model_from_json(const nlohmann::json& doc) {
    using namespace detail;
    PcaModel model;
    model.mean = vector_from(doc.at("mean"));
    const auto& rows = doc.at("components");
    const auto m = static_cast<Eigen::Index>(rows.size());
    model.components.resize(m, model.mean.size());
    for (Eigen::Index u = 0; u < m; ++u) {
        model.components.row(u) = vector_from(rows[static_cast<std::size_t>(u)]).transpose();
    }
    model.eigenvalues = vector_from(doc.at("eigenvalues"));
    model.explained_variance_ratio = vector_from(doc.at("explained_variance_ratio"));
    model.sample_count = doc.at("sample_count").get<Eigen::Index>();
    model.warnings = doc.at("warnings").get<std::vector<std::string>>();
    return model;
}

}  // namespace coordkit
