#include "coordkit/error.hpp"
#include "coordkit/jcvpca.hpp"
#include "coordkit/simulate.hpp"

#include "support/corpus.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

using namespace coordkit;

namespace {

Dataset swap_columns(const Dataset& ds) {
    std::vector<Repetition> reps;
    for (const auto& r : ds.reps()) {
        Eigen::MatrixXd m = r.angles();
        m.col(0).swap(m.col(1));
        reps.emplace_back(r.time(), std::move(m));
    }
    return ds.with_reps(ds.name() + "_swapped", std::move(reps));
}

Dataset scaled(const Dataset& ds, double factor) {
    std::vector<Repetition> reps;
    for (const auto& r : ds.reps()) reps.emplace_back(r.time(), r.angles() * factor);
    return ds.with_reps(ds.name(), std::move(reps));
}

// Independent reprojection: Eigen's solver for both fits, explicit centering
// with A's mean.
Eigen::MatrixXd oracle_jrw_b(const Dataset& a, const Dataset& b, Eigen::Index m) {
    auto top = [](const Eigen::MatrixXd& x, Eigen::Index k) {
        const Eigen::MatrixXd c = x.rowwise() - x.colwise().mean();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c.transpose() * c / static_cast<double>(x.rows() - 1));
        return Eigen::MatrixXd(es.eigenvectors().rightCols(k).rowwise().reverse().transpose());
    };
    const Eigen::MatrixXd xa = a.concatenated();
    const Eigen::MatrixXd ra = top(xa, m);
    const Eigen::MatrixXd scores = (b.concatenated().rowwise() - xa.colwise().mean()) * ra.transpose();
    return (top(scores, m) * ra).cwiseAbs();
}

}  // namespace

TEST_SUITE("compute_jrw") {
    TEST_CASE("identical datasets give identical weights") {
        std::mt19937_64 rng(1);
        auto ds = coordkit::testing::make_dataset(rng, coordkit::testing::random_shapes(rng, 3), 5, "a");
        auto jrw = compute_jrw(ds, ds, 2);
        CHECK((jrw.jrw_a - jrw.jrw_b).cwiseAbs().maxCoeff() < 1e-9);
    }

    TEST_CASE("swapping the two joints swaps the comparison columns") {
        std::mt19937_64 rng(2);
        auto ds = coordkit::testing::make_dataset(rng, coordkit::testing::random_shapes(rng, 2), 5, "a");
        auto sw = swap_columns(ds);
        auto jrw = compute_jrw(ds, sw, 2);
        Eigen::MatrixXd expected = jrw.jrw_a;
        expected.col(0).swap(expected.col(1));
        CHECK((jrw.jrw_b - expected).cwiseAbs().maxCoeff() < 1e-9);
    }

    TEST_CASE("simulated pair: comparison PC1 weighs theta1 less") {
        auto sim = generate_simulated({});
        auto jrw = compute_jrw(sim.a, sim.b, 2);
        CHECK(jrw.jrw_b(0, 0) < jrw.jrw_a(0, 0));
    }

    TEST_CASE("joint list mismatch") {
        std::mt19937_64 rng(3);
        auto a = coordkit::testing::make_dataset(rng, coordkit::testing::random_shapes(rng, 2), 4, "a");
        auto b = coordkit::testing::make_dataset(rng, coordkit::testing::random_shapes(rng, 3), 4, "b");
        CHECK_THROWS_AS(compute_jrw(a, b, 2), ParameterError);
    }

    TEST_CASE("matches an independent reprojection") {
        for (const auto& e : coordkit::testing::random_corpus(8)) {
            const auto n = static_cast<Eigen::Index>(e.a.joint_count());
            const auto jrw = compute_jrw(e.a, e.b, n);
            CHECK((jrw.jrw_b - oracle_jrw_b(e.a, e.b, n)).cwiseAbs().maxCoeff() < 1e-6);
        }
    }
}

TEST_SUITE("compute_jcvpca") {
    TEST_CASE("self comparison is the zero matrix") {
        std::mt19937_64 rng(4);
        auto ds = coordkit::testing::make_dataset(rng, coordkit::testing::random_shapes(rng, 4), 6, "a");
        auto res = compute_jcvpca(ds, ds, {3, 1, true});
        CHECK(res.delta.cwiseAbs().maxCoeff() < 1e-9);
        CHECK(res.delta.rows() == 3);
        CHECK(res.delta.cols() == 4);
    }

    TEST_CASE("simulated defaults: signs of the PC1 changes") {
        auto sim = generate_simulated({});
        auto res = compute_jcvpca(sim.a, sim.b, {2, 1, true});
        CHECK(res.delta(0, 0) < 0.0);
        CHECK(res.delta(0, 1) > 0.0);
        // Closed form for whole periods: B's PC1 is (0, 1); A's PC1 is the
        // top eigenvector of [[1/2, cos 1], [cos 1, 2]] (population moments).
        Eigen::Matrix2d cov;
        cov << 0.5, std::cos(1.0), std::cos(1.0), 2.0;
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(cov);
        const Eigen::Vector2d a1 = es.eigenvectors().col(1).cwiseAbs();
        CHECK(res.delta(0, 0) == doctest::Approx(-a1(0)).epsilon(0.01));
        CHECK(res.delta(0, 1) == doctest::Approx(1.0 - a1(1)).epsilon(0.05));
    }

    TEST_CASE("weighted rows scale by reference explained variance") {
        std::mt19937_64 rng(5);
        auto a = coordkit::testing::make_dataset(rng, coordkit::testing::random_shapes(rng, 3), 5, "a");
        auto b = coordkit::testing::make_dataset(rng, coordkit::testing::random_shapes(rng, 3), 5, "b");
        auto res = compute_jcvpca(a, b, {3, 2, true});
        REQUIRE(res.weighted_delta.has_value());
        for (Eigen::Index u = 0; u < 3; ++u)
            for (Eigen::Index i = 0; i < 3; ++i)
                CHECK((*res.weighted_delta)(u, i) ==
                      doctest::Approx(res.jrw.explained_variance_a(u) * res.delta(u, i)));
        auto unweighted = compute_jcvpca(a, b, {3, 2, false});
        CHECK_FALSE(unweighted.weighted_delta.has_value());
        CHECK(res.reference_name == "a");
        CHECK(res.comparison_name == "b");
    }

    TEST_CASE("invalid m and p") {
        std::mt19937_64 rng(6);
        auto a = coordkit::testing::make_dataset(rng, coordkit::testing::random_shapes(rng, 3), 4, "a");
        CHECK_THROWS_AS(compute_jcvpca(a, a, {2, 0, true}), ParameterError);
        CHECK_THROWS_AS(compute_jcvpca(a, a, {1, 2, true}), ParameterError);
        CHECK_THROWS_AS(compute_jcvpca(a, a, {4, 1, true}), ParameterError);
    }

    TEST_CASE("property: bounded, unit rows, scale invariant, both directions complete") {
        for (const auto& e : coordkit::testing::random_corpus()) {
            const auto n = static_cast<Eigen::Index>(e.a.joint_count());
            for (Eigen::Index m = 1; m <= n; ++m) {
                const auto ab = compute_jcvpca(e.a, e.b, {m, 1, true});
                const auto ba = compute_jcvpca(e.b, e.a, {m, 1, true});
                CHECK(ab.delta.cwiseAbs().maxCoeff() <= 1.0 + 1e-12);
                CHECK(ba.delta.cwiseAbs().maxCoeff() <= 1.0 + 1e-12);
                CHECK(ab.jrw.jrw_a.minCoeff() >= 0.0);
                CHECK(ab.jrw.jrw_b.maxCoeff() <= 1.0 + 1e-12);
                for (Eigen::Index u = 0; u < m; ++u) {
                    CHECK(ab.jrw.jrw_a.row(u).norm() == doctest::Approx(1.0).epsilon(1e-9));
                    CHECK(ab.jrw.jrw_b.row(u).norm() == doctest::Approx(1.0).epsilon(1e-9));
                }
            }
            const auto base = compute_jrw(e.a, e.c, n);
            const auto bigger = compute_jrw(scaled(e.a, 3.7), e.c, n);
            CHECK((base.jrw_a - bigger.jrw_a).cwiseAbs().maxCoeff() < 1e-9);
        }
    }

    TEST_CASE("sign flips upstream do not change the weights") {
        std::mt19937_64 rng(7);
        auto a = coordkit::testing::make_dataset(rng, coordkit::testing::random_shapes(rng, 3), 5, "a");
        auto b = coordkit::testing::make_dataset(rng, coordkit::testing::random_shapes(rng, 3), 5, "b");
        auto jrw = compute_jrw(a, b, 3);
        Eigen::Matrix3d flip = Eigen::Vector3d(-1.0, 1.0, -1.0).asDiagonal();
        const Eigen::MatrixXd flipped_a = flip * jrw.model_a.components;
        const Eigen::MatrixXd flipped_b = flip * jrw.model_b_projected.components * flip;
        CHECK((flipped_a.cwiseAbs() - jrw.jrw_a).cwiseAbs().maxCoeff() == 0.0);
        CHECK(((flipped_b * flipped_a).cwiseAbs() - jrw.jrw_b).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_SUITE("select_rows") {
    JcvPcaResult make(Eigen::Index m, Eigen::Index p) {
        JcvPcaResult r;
        r.m = m;
        r.p = p;
        r.delta = Eigen::MatrixXd::Zero(m, 3);
        for (Eigen::Index u = 0; u < m; ++u) r.delta.row(u).setConstant(static_cast<double>(u + 1));
        return r;
    }

    TEST_CASE("task rows") {
        auto s = select_rows(make(2, 1), RowFocus::task);
        CHECK(s.rows == std::vector<Eigen::Index>{0});
        CHECK(s.values(0, 0) == 1.0);
        CHECK_FALSE(s.warning);
    }

    TEST_CASE("null-space rows") {
        auto s = select_rows(make(2, 1), RowFocus::null_space);
        CHECK(s.rows == std::vector<Eigen::Index>{1});
        CHECK(s.values(0, 2) == 2.0);
    }

    TEST_CASE("m == p leaves an empty null space with a warning") {
        auto s = select_rows(make(2, 2), RowFocus::null_space);
        CHECK(s.rows.empty());
        CHECK(s.values.rows() == 0);
        CHECK(s.warning.has_value());
    }

    TEST_CASE("percent change rounds to the nearest integer") {
        CHECK(percent_change(-0.18) == -18);
        CHECK(percent_change(0.0749) == 7);
        CHECK(percent_change(-0.3072) == -31);
    }
}
