#include "coordkit/baseline.hpp"

#include "coordkit/error.hpp"
#include "json_util.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <random>
#include <thread>

namespace coordkit {

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_halves(std::size_t k,
                                                                          std::uint64_t seed,
                                                                          std::size_t index) {
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Independent stream per split so splits can run in any order.
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::mt19937_64 rng(seq);
    std::shuffle(order.begin(), order.end(), rng);

    const std::size_t ref_size = (k + 1) / 2;
    std::vector<std::size_t> ref(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(ref_size));
    std::vector<std::size_t> cmp(order.begin() + static_cast<std::ptrdiff_t>(ref_size), order.end());
    return {std::move(ref), std::move(cmp)};
}

namespace {

struct SplitOutcome {
    Eigen::MatrixXd delta;
    std::vector<double> areas;
};

SplitOutcome run_split(const Dataset& ds, const BaselineOptions& options, const NormalizedGrid& grid,
                       std::size_t index) {
    auto [ref_idx, cmp_idx] = split_halves(ds.rep_count(), options.seed, index);
    auto pick = [&](const std::vector<std::size_t>& idx, const char* role) {
        std::vector<Repetition> reps;
        for (auto r : idx) reps.push_back(ds.reps()[r]);
        return ds.with_reps(ds.name() + "/split" + std::to_string(index) + "/" + role, std::move(reps));
    };
    const Dataset ref = pick(ref_idx, "ref");
    const Dataset cmp = pick(cmp_idx, "cmp");

    SplitOutcome out;
    out.delta = compute_jcvpca(ref, cmp, {options.m, options.p, false}).delta;
    for (const auto& r : jsvcrp_all_pairs(ref, cmp, grid, options.crp)) out.areas.push_back(r.area);
    return out;
}

}  // namespace

BaselineReport shuffle_split_baseline(const Dataset& ds, const BaselineOptions& options) {
    if (ds.rep_count() < 4) {
        throw ValidationError("baseline needs at least 4 repetitions, dataset '" + ds.name() +
                              "' has " + std::to_string(ds.rep_count()));
    }
    if (options.n_splits < 2) throw ParameterError("baseline needs at least 2 splits");
    const NormalizedGrid grid(options.grid_size);

    std::vector<SplitOutcome> outcomes(options.n_splits);
    unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, options.n_splits));
    if (threads <= 1) {
        for (std::size_t s = 0; s < options.n_splits; ++s) outcomes[s] = run_split(ds, options, grid, s);
    } else {
        std::vector<std::future<void>> workers;
        for (unsigned t = 0; t < threads; ++t) {
            workers.push_back(std::async(std::launch::async, [&, t] {
                for (std::size_t s = t; s < options.n_splits; s += threads)
                    outcomes[s] = run_split(ds, options, grid, s);
            }));
        }
        for (auto& w : workers) w.get();
    }

    BaselineReport report;
    report.dataset_name = ds.name();
    report.joints = ds.joints();
    report.n_splits = options.n_splits;
    report.seed = options.seed;
    report.m = options.m;
    report.p = options.p;
    report.grid_size = options.grid_size;
    const std::size_t n = ds.joint_count();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) report.pairs.emplace_back(i, j);

    // Two-pass reduction in split order keeps the result independent of
    // threading. std uses n - 1.
    const double count = static_cast<double>(options.n_splits);
    const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(options.m, static_cast<Eigen::Index>(n));
    report.jcvpca_mean = zero;
    report.jsvcrp_mean.assign(report.pairs.size(), 0.0);
    for (const auto& o : outcomes) {
        report.jcvpca_mean += o.delta;
        for (std::size_t q = 0; q < o.areas.size(); ++q) report.jsvcrp_mean[q] += o.areas[q];
    }
    report.jcvpca_mean /= count;
    for (auto& v : report.jsvcrp_mean) v /= count;

    Eigen::MatrixXd sq = zero;
    std::vector<double> area_sq(report.pairs.size(), 0.0);
    for (const auto& o : outcomes) {
        sq += (o.delta - report.jcvpca_mean).cwiseAbs2();
        for (std::size_t q = 0; q < o.areas.size(); ++q) {
            const double d = o.areas[q] - report.jsvcrp_mean[q];
            area_sq[q] += d * d;
        }
    }
    report.jcvpca_std = (sq / (count - 1.0)).cwiseSqrt();
    report.jcvpca_sem = report.jcvpca_std / std::sqrt(count);
    for (std::size_t q = 0; q < report.pairs.size(); ++q) {
        const double sd = std::sqrt(area_sq[q] / (count - 1.0));
        report.jsvcrp_std.push_back(sd);
        report.jsvcrp_sem.push_back(sd / std::sqrt(count));
    }
    return report;
}

std::string_view to_string(ThresholdRule rule) {
    return rule == ThresholdRule::mean_std ? "std" : "sem";
}

ThresholdRule parse_threshold_rule(std::string_view text) {
    if (text == "std" || text == "mean_std") return ThresholdRule::mean_std;
    if (text == "sem" || text == "mean_sem") return ThresholdRule::mean_sem;
    throw ConfigError("unknown threshold rule '" + std::string(text) + "' (expected std or sem)");
}

std::string_view to_string(Verdict verdict) {
    return verdict == Verdict::within_variability ? "within_variability" : "exceeds_variability";
}

bool SignificanceVerdict::any_exceeds() const {
    return std::find(verdicts.begin(), verdicts.end(), Verdict::exceeds_variability) != verdicts.end();
}

Verdict classify_value(double value, double mean, double band) {
    band += kClassifySlack;
    const double lo = std::min(mean - band, -kClassifySlack);
    const double hi = std::max(mean + band, kClassifySlack);
    return (value < lo || value > hi) ? Verdict::exceeds_variability : Verdict::within_variability;
}

SignificanceVerdict classify(const JcvPcaResult& result, const BaselineReport& baseline,
                             ThresholdRule rule) {
    if (result.delta.rows() != baseline.jcvpca_mean.rows() ||
        result.delta.cols() != baseline.jcvpca_mean.cols()) {
        throw ParameterError("classify: JcvPCA result is " + std::to_string(result.delta.rows()) + "x" +
                             std::to_string(result.delta.cols()) + ", baseline is " +
                             std::to_string(baseline.jcvpca_mean.rows()) + "x" +
                             std::to_string(baseline.jcvpca_mean.cols()));
    }
    const auto& band = rule == ThresholdRule::mean_std ? baseline.jcvpca_std : baseline.jcvpca_sem;
    SignificanceVerdict out{rule, result.delta.rows(), result.delta.cols(), {}};
    for (Eigen::Index r = 0; r < out.rows; ++r)
        for (Eigen::Index c = 0; c < out.cols; ++c)
            out.verdicts.push_back(classify_value(result.delta(r, c), baseline.jcvpca_mean(r, c), band(r, c)));
    return out;
}

SignificanceVerdict classify(std::span<const JsvCrpResult> results, const BaselineReport& baseline,
                             ThresholdRule rule) {
    if (results.size() != baseline.pairs.size()) {
        throw ParameterError("classify: " + std::to_string(results.size()) + " JsvCRP results, baseline has " +
                             std::to_string(baseline.pairs.size()) + " pairs");
    }
    const auto& band = rule == ThresholdRule::mean_std ? baseline.jsvcrp_std : baseline.jsvcrp_sem;
    SignificanceVerdict out{rule, static_cast<Eigen::Index>(results.size()), 1, {}};
    for (std::size_t q = 0; q < results.size(); ++q) {
        if (results[q].first != baseline.pairs[q].first || results[q].second != baseline.pairs[q].second) {
            throw ParameterError("classify: JsvCRP pair order differs from baseline");
        }
        out.verdicts.push_back(classify_value(results[q].area, baseline.jsvcrp_mean[q], band[q]));
    }
    return out;
}

nlohmann::json to_json(const BaselineReport& report) {
    using namespace detail;
    nlohmann::json pairs = nlohmann::json::array();
    for (auto [i, j] : report.pairs) pairs.push_back({i, j});
    return {
        {"dataset", report.dataset_name},
        {"joints", report.joints},
        {"n_splits", report.n_splits},
        {"seed", report.seed},
        {"m", report.m},
        {"p", report.p},
        {"grid_size", report.grid_size},
        {"jcvpca", {{"mean", matrix_json(report.jcvpca_mean)},
                    {"std", matrix_json(report.jcvpca_std)},
                    {"sem", matrix_json(report.jcvpca_sem)}}},
        {"jsvcrp", {{"pairs", pairs},
                    {"axis", "normalized [0,1], deg"},
                    {"mean", report.jsvcrp_mean},
                    {"std", report.jsvcrp_std},
                    {"sem", report.jsvcrp_sem}}},
    };
}

BaselineReport baseline_from_json(const nlohmann::json& doc) {
    using namespace detail;
    BaselineReport r;
    r.dataset_name = doc.at("dataset").get<std::string>();
    r.joints = doc.at("joints").get<std::vector<std::string>>();
    r.n_splits = doc.at("n_splits").get<std::size_t>();
    r.seed = doc.at("seed").get<std::uint64_t>();
    r.m = doc.at("m").get<Eigen::Index>();
    r.p = doc.at("p").get<Eigen::Index>();
    r.grid_size = doc.at("grid_size").get<std::size_t>();
    const auto& jc = doc.at("jcvpca");
    r.jcvpca_mean = matrix_from(jc.at("mean"));
    r.jcvpca_std = matrix_from(jc.at("std"));
    r.jcvpca_sem = matrix_from(jc.at("sem"));
    const auto& js = doc.at("jsvcrp");
    for (const auto& p : js.at("pairs")) r.pairs.emplace_back(p[0].get<std::size_t>(), p[1].get<std::size_t>());
    r.jsvcrp_mean = js.at("mean").get<std::vector<double>>();
    r.jsvcrp_std = js.at("std").get<std::vector<double>>();
    r.jsvcrp_sem = js.at("sem").get<std::vector<double>>();
    return r;
}

nlohmann::json to_json(const SignificanceVerdict& verdict) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < verdict.rows; ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < verdict.cols; ++c) row.push_back(to_string(verdict.at(r, c)));
        rows.push_back(row);
    }
    return {{"rule", to_string(verdict.rule)}, {"verdicts", rows}};
}

SignificanceVerdict verdict_from_json(const nlohmann::json& doc) {
    SignificanceVerdict v;
    v.rule = parse_threshold_rule(doc.at("rule").get<std::string>());
    const auto& rows = doc.at("verdicts");
    v.rows = static_cast<Eigen::Index>(rows.size());
    v.cols = rows.empty() ? 0 : static_cast<Eigen::Index>(rows[0].size());
    for (const auto& row : rows)
        for (const auto& cell : row)
            v.verdicts.push_back(cell.get<std::string>() == "within_variability"
                                     ? Verdict::within_variability
                                     : Verdict::exceeds_variability);
    return v;
}

}  // namespace coordkit
