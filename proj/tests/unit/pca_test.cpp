#include "coordkit/error.hpp"
#include "coordkit/pca.hpp"

#include "support/corpus.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <random>

using namespace coordkit;

namespace {

Eigen::MatrixXd gaussian_cloud(std::uint64_t seed, Eigen::Index rows, const Eigen::MatrixXd& mix,
                               const Eigen::RowVectorXd& offset) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    Eigen::MatrixXd z(rows, mix.rows());
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < z.cols(); ++c) z(r, c) = nd(rng);
    return (z * mix).rowwise() + offset;
}

Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& x) {
    const Eigen::MatrixXd c = x.rowwise() - x.colwise().mean();
    return c.transpose() * c / static_cast<double>(x.rows() - 1);
}

bool has_warning(const PcaModel& m, const std::string& needle) {
    for (const auto& w : m.warnings)
        if (w.find(needle) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST_SUITE("symmetric_eigen") {
    TEST_CASE("agrees with a reference eigensolver") {
        std::mt19937_64 rng(4);
        std::normal_distribution<double> nd;
        for (int n = 1; n <= 8; ++n) {
            Eigen::MatrixXd r(n, n);
            for (auto& v : r.reshaped()) v = nd(rng);
            const Eigen::MatrixXd s = r * r.transpose();
            const auto mine = symmetric_eigen(s);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(s);
            for (int k = 0; k < n; ++k) {
                CHECK(mine.values(k) == doctest::Approx(ref.eigenvalues()(n - 1 - k)).epsilon(1e-10).scale(1.0));
                const double align = std::abs(mine.vectors.col(k).dot(ref.eigenvectors().col(n - 1 - k)));
                CHECK(align == doctest::Approx(1.0).epsilon(1e-8));
            }
            CHECK((s * mine.vectors - mine.vectors * mine.values.asDiagonal()).norm() < 1e-9 * (1.0 + s.norm()));
        }
    }

    TEST_CASE("sign convention on every vector") {
        Eigen::Matrix3d s;
        s << 4, -1, 0.5, -1, 3, 0.2, 0.5, 0.2, 1;
        const auto e = symmetric_eigen(s);
        for (int k = 0; k < 3; ++k) {
            Eigen::Index idx;
            e.vectors.col(k).cwiseAbs().maxCoeff(&idx);
            CHECK(e.vectors(idx, k) >= 0.0);
        }
    }

    TEST_CASE("apply_sign_convention flips negative-dominant rows") {
        Eigen::RowVector3d r(0.2, -0.9, 0.1);
        apply_sign_convention(r);
        CHECK(r(1) == 0.9);
        CHECK(r(0) == -0.2);
    }
}

TEST_SUITE("fit_pca") {
    TEST_CASE("rank-1 data gives PC1 along (1, 2)/sqrt5") {
        Eigen::MatrixXd x(200, 2);
        for (int i = 0; i < 200; ++i) {
            x(i, 0) = std::sin(0.05 * i) * 10.0;
            x(i, 1) = 2.0 * x(i, 0);
        }
        auto model = fit_pca(x, 2);
        CHECK(model.components(0, 0) == doctest::Approx(1.0 / std::sqrt(5.0)));
        CHECK(model.components(0, 1) == doctest::Approx(2.0 / std::sqrt(5.0)));
        CHECK(model.explained_variance_ratio(0) == doctest::Approx(1.0));
        CHECK(model.explained_variance_ratio(1) == doctest::Approx(0.0).scale(1.0));
    }

    TEST_CASE("isotropic cloud triggers the near-tie warning") {
        const auto x = gaussian_cloud(17, 5000, Eigen::Matrix2d::Identity(), Eigen::RowVector2d(3.0, -1.0));
        auto model = fit_pca(x, 1);
        auto full = fit_pca(x, 2);
        CHECK(full.eigenvalues(1) / full.eigenvalues(0) > 0.9);
        CHECK(has_warning(model, "near-tie"));
        CHECK_FALSE(has_warning(full, "near-tie"));  // nothing discarded at m = n
    }

    TEST_CASE("well-separated spectrum has no tie warning") {
        Eigen::Matrix2d mix;
        mix << 3.0, 0.0, 0.0, 1.0;
        auto model = fit_pca(gaussian_cloud(2, 500, mix, Eigen::RowVector2d::Zero()), 1);
        CHECK_FALSE(has_warning(model, "near-tie"));
    }

    TEST_CASE("data already in its own frame gives a signed identity") {
        std::mt19937_64 rng(3);
        Eigen::Matrix3d mix = Eigen::Vector3d(5.0, 2.0, 0.5).asDiagonal();
        Eigen::MatrixXd x = gaussian_cloud(9, 400, mix, Eigen::RowVector3d(1, 2, 3));
        const auto first = fit_pca(x, 3);
        const Eigen::MatrixXd scores = project(x, first);
        const auto again = fit_pca(scores, 3);
        CHECK((again.components.cwiseAbs() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-9);
    }

    TEST_CASE("sample-size warning below ten samples per joint") {
        Eigen::MatrixXd x = gaussian_cloud(1, 25, Eigen::Matrix3d::Identity() + Eigen::Matrix3d::Constant(0.3),
                                           Eigen::RowVector3d::Zero());
        CHECK(has_warning(fit_pca(x, 2), "fewer than 10"));
        Eigen::MatrixXd y = gaussian_cloud(1, 30, Eigen::Matrix3d::Identity(), Eigen::RowVector3d::Zero());
        CHECK_FALSE(has_warning(fit_pca(y, 3), "fewer than 10"));
    }

    TEST_CASE("m out of range") {
        Eigen::MatrixXd x = Eigen::MatrixXd::Random(50, 3);
        CHECK_THROWS_AS(fit_pca(x, 0), ParameterError);
        CHECK_THROWS_AS(fit_pca(x, 4), ParameterError);
    }

    TEST_CASE("dataset overload concatenates repetitions") {
        std::mt19937_64 rng(12);
        auto ds = coordkit::testing::make_dataset(rng, coordkit::testing::random_shapes(rng, 3), 5, "d");
        auto a = fit_pca(ds, 2);
        auto b = fit_pca(ds.concatenated(), 2);
        CHECK(a.components == b.components);
        CHECK(a.sample_count == ds.total_samples());
    }
}

TEST_SUITE("pca properties") {
    TEST_CASE("orthonormal rows, ordered ratios, covariance oracle, determinism") {
        for (const auto& entry : coordkit::testing::random_corpus()) {
            const auto n = static_cast<Eigen::Index>(entry.a.joint_count());
            const auto model = fit_pca(entry.a, n);
            const Eigen::MatrixXd gram = model.components * model.components.transpose();
            CHECK((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-9);
            for (Eigen::Index u = 1; u < n; ++u)
                CHECK(model.explained_variance_ratio(u) <= model.explained_variance_ratio(u - 1));
            CHECK(model.explained_variance_ratio.sum() == doctest::Approx(1.0).epsilon(1e-12));
            for (Eigen::Index u = 0; u < n; ++u) {
                Eigen::Index idx;
                model.components.row(u).cwiseAbs().maxCoeff(&idx);
                CHECK(model.components(u, idx) >= 0.0);
            }

            const Eigen::MatrixXd x = entry.a.concatenated();
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(sample_covariance(x));
            for (Eigen::Index u = 0; u < n; ++u) {
                CHECK(model.eigenvalues(u) ==
                      doctest::Approx(ref.eigenvalues()(n - 1 - u)).epsilon(1e-9));
            }

            // Reconstruction with m = n.
            const Eigen::MatrixXd scores = project(x, model);
            CHECK((inverse_project(scores, model) - x).cwiseAbs().maxCoeff() < 1e-9 * (1.0 + x.cwiseAbs().maxCoeff()));

            // Score variances equal eigenvalues.
            const Eigen::MatrixXd score_cov = sample_covariance(scores);
            for (Eigen::Index u = 0; u < n; ++u)
                CHECK(score_cov(u, u) == doctest::Approx(model.eigenvalues(u)).epsilon(1e-9));
            CHECK(score_cov.trace() == doctest::Approx(model.eigenvalues.sum()).epsilon(1e-9));

            const auto again = fit_pca(entry.a, n);
            CHECK(again.components == model.components);
            CHECK(again.eigenvalues == model.eigenvalues);
        }
    }

    TEST_CASE("rotation equivariance in 2-D") {
        Eigen::Matrix2d mix;
        mix << 4.0, 0.0, 0.0, 1.0;
        const Eigen::MatrixXd x = gaussian_cloud(31, 800, mix, Eigen::RowVector2d(2.0, 1.0));
        const auto base = fit_pca(x, 2);
        for (double alpha : {0.3, 1.1, 2.5, -0.7}) {
            Eigen::Matrix2d rot;
            rot << std::cos(alpha), -std::sin(alpha), std::sin(alpha), std::cos(alpha);
            const Eigen::MatrixXd xr = x * rot.transpose();
            const auto turned = fit_pca(xr, 2);
            for (int u = 0; u < 2; ++u) {
                const Eigen::Vector2d expected = rot * base.components.row(u).transpose();
                CHECK(std::abs(expected.dot(turned.components.row(u).transpose())) == doctest::Approx(1.0).epsilon(1e-9));
            }
        }
    }
}

TEST_SUITE("project") {
    TEST_CASE("identity components give centered input") {
        PcaModel model;
        model.mean = Eigen::Vector2d(1.0, 2.0);
        model.components = Eigen::Matrix2d::Identity();
        Eigen::MatrixXd pt(1, 2);
        pt << 1.0, 2.0;
        CHECK(project(pt, model).isZero());
        Eigen::MatrixXd pts(2, 2);
        pts << 3.0, 5.0, -1.0, 0.0;
        Eigen::MatrixXd expected(2, 2);
        expected << 2.0, 3.0, -2.0, -2.0;
        CHECK(project(pts, model) == expected);
    }

    TEST_CASE("dimension mismatch") {
        PcaModel model;
        model.mean = Eigen::Vector2d::Zero();
        model.components = Eigen::Matrix2d::Identity();
        CHECK_THROWS_AS(project(Eigen::MatrixXd::Zero(3, 3), model), ParameterError);
    }

    TEST_CASE("dataset projection names PC columns and keeps repetitions") {
        std::mt19937_64 rng(6);
        auto ds = coordkit::testing::make_dataset(rng, coordkit::testing::random_shapes(rng, 3), 4, "d");
        auto model = fit_pca(ds, 2);
        auto scores = project(ds, model);
        CHECK(scores.joints() == std::vector<std::string>{"PC1", "PC2"});
        REQUIRE(scores.rep_count() == 4);
        CHECK(scores.reps()[2].samples() == ds.reps()[2].samples());
        CHECK((scores.reps()[2].angles() - project(ds.reps()[2].angles(), model)).cwiseAbs().maxCoeff() == 0.0);
    }

    TEST_CASE("json round trip") {
        std::mt19937_64 rng(8);
        auto ds = coordkit::testing::make_dataset(rng, coordkit::testing::random_shapes(rng, 4), 3, "d");
        auto model = fit_pca(ds, 3);
        auto back = pca_model_from_json(to_json(model));
        CHECK(back.components == model.components);
        CHECK(back.mean == model.mean);
        CHECK(back.explained_variance_ratio == model.explained_variance_ratio);
        CHECK(to_json(back) == to_json(model));
    }
}
