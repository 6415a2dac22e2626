#include "coordkit/baseline.hpp"
#include "coordkit/crp.hpp"
#include "coordkit/dtw.hpp"
#include "coordkit/jcvpca.hpp"
#include "coordkit/jsvcrp.hpp"
#include "coordkit/pca.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace coordkit;

namespace {

Dataset synthetic(std::size_t joints, std::size_t reps, std::size_t samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> amp(5.0, 40.0), phase(-3.0, 3.0), noise(-0.5, 0.5);
    std::vector<double> a(joints), p(joints);
    for (std::size_t j = 0; j < joints; ++j) {
        a[j] = amp(rng);
        p[j] = phase(rng);
    }
    std::vector<std::string> names;
    for (std::size_t j = 0; j < joints; ++j) names.push_back("j" + std::to_string(j));
    std::vector<Repetition> out;
    for (std::size_t r = 0; r < reps; ++r) {
        std::vector<double> time(samples);
        Eigen::MatrixXd angles(static_cast<Eigen::Index>(samples), static_cast<Eigen::Index>(joints));
        for (std::size_t i = 0; i < samples; ++i) {
            const double u = static_cast<double>(i) / static_cast<double>(samples - 1);
            time[i] = u;
            for (std::size_t j = 0; j < joints; ++j)
                angles(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    a[j] * std::sin(2.0 * std::numbers::pi * u + p[j]) + noise(rng);
        }
        out.emplace_back(std::move(time), std::move(angles));
    }
    return Dataset("bench" + std::to_string(seed), names, std::move(out), AngleUnit::deg);
}

void BM_FitPca(benchmark::State& state) {
    const auto ds = synthetic(static_cast<std::size_t>(state.range(0)), 10, 500, 1);
    const auto m = static_cast<Eigen::Index>(ds.joint_count());
    for (auto _ : state) benchmark::DoNotOptimize(fit_pca(ds, m));
}
BENCHMARK(BM_FitPca)->Arg(2)->Arg(8)->Arg(20);

void BM_ComputeJcvPca(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = synthetic(n, 10, 500, 1);
    const auto b = synthetic(n, 10, 500, 2);
    const JcvPcaOptions opts{3, 2, true};
    for (auto _ : state) benchmark::DoNotOptimize(compute_jcvpca(a, b, opts));
}
BENCHMARK(BM_ComputeJcvPca)->Arg(3)->Arg(8)->Arg(20);

void BM_MeanCrp(benchmark::State& state) {
    const auto ds = synthetic(2, 15, static_cast<std::size_t>(state.range(0)), 3);
    const NormalizedGrid grid;
    for (auto _ : state) benchmark::DoNotOptimize(mean_crp(ds, 0, 1, grid));
}
BENCHMARK(BM_MeanCrp)->Arg(200)->Arg(2000);

void BM_JsvCrpAllPairs(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = synthetic(n, 10, 300, 4);
    const auto b = synthetic(n, 10, 300, 5);
    const NormalizedGrid grid;
    for (auto _ : state) benchmark::DoNotOptimize(jsvcrp_all_pairs(a, b, grid));
}
BENCHMARK(BM_JsvCrpAllPairs)->Arg(2)->Arg(6);

void BM_Dtw(benchmark::State& state) {
    const auto len = static_cast<std::size_t>(state.range(0));
    std::vector<double> a(len), b(len);
    for (std::size_t i = 0; i < len; ++i) {
        const double u = static_cast<double>(i) / static_cast<double>(len - 1);
        a[i] = std::sin(2.0 * std::numbers::pi * u);
        b[i] = std::sin(2.0 * std::numbers::pi * u * u);
    }
    for (auto _ : state) benchmark::DoNotOptimize(time_align_dtw(a, b));
}
BENCHMARK(BM_Dtw)->Arg(101)->Arg(500);

void BM_ShuffleSplitBaseline(benchmark::State& state) {
    const auto ds = synthetic(3, 10, 300, 6);
    BaselineOptions opts;
    opts.threads = static_cast<unsigned>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(shuffle_split_baseline(ds, opts));
}
BENCHMARK(BM_ShuffleSplitBaseline)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
