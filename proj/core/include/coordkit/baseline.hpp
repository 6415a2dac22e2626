#pragma once

#include "coordkit/crp.hpp"
#include "coordkit/dataset.hpp"
#include "coordkit/jcvpca.hpp"
#include "coordkit/jsvcrp.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace coordkit {

inline constexpr std::size_t kDefaultSplits = 15;

struct BaselineOptions {
    std::size_t n_splits = kDefaultSplits;
    std::uint64_t seed = 0;
    Eigen::Index m = 2;
    Eigen::Index p = 1;
    std::size_t grid_size = NormalizedGrid::kDefaultSize;
    CrpOptions crp{};
    // 0 picks std::thread::hardware_concurrency(). Results do not depend on it.
    unsigned threads = 0;
};

/// Natural variability of both metrics within one condition, from repeated
/// random halvings of its repetitions. std is the sample standard deviation
/// across splits; sem = std / sqrt(n_splits). JsvCRP values use the
/// normalized time axis (deg x normalized time).
struct BaselineReport {
    std::string dataset_name;
    std::vector<std::string> joints;
    Eigen::MatrixXd jcvpca_mean, jcvpca_std, jcvpca_sem;  // m x n
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<double> jsvcrp_mean, jsvcrp_std, jsvcrp_sem;
    std::size_t n_splits = 0;
    std::uint64_t seed = 0;
    Eigen::Index m = 0;
    Eigen::Index p = 0;
    std::size_t grid_size = 0;
};

// Repetition indices of both halves for split `index`: the reference half
// gets ceil(k/2) of them. Derived from (seed, index) only.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_halves(std::size_t k,
                                                                          std::uint64_t seed,
                                                                          std::size_t index);

BaselineReport shuffle_split_baseline(const Dataset& ds, const BaselineOptions& options);

enum class ThresholdRule { mean_std, mean_sem };
enum class Verdict { within_variability, exceeds_variability };

std::string_view to_string(ThresholdRule rule);
ThresholdRule parse_threshold_rule(std::string_view text);  // "std" | "sem"
std::string_view to_string(Verdict verdict);

struct SignificanceVerdict {
    ThresholdRule rule = ThresholdRule::mean_std;
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
    std::vector<Verdict> verdicts;  // row-major

    Verdict at(Eigen::Index r, Eigen::Index c = 0) const {
        return verdicts[static_cast<std::size_t>(r * cols + c)];
    }
    bool any_exceeds() const;
};

// Absolute slack added to every band so floating-point noise around a zero
// band (e.g. a baseline of identical repetitions) is not read as a change.
inline constexpr double kClassifySlack = 1e-12;

// Outside the closed interval [mean - band, mean + band] exceeds. The interval
// is stretched to reach zero when it does not contain it: a result nearer to
// "no change" than two halves of the same condition is never a change.
Verdict classify_value(double value, double mean, double band);

SignificanceVerdict classify(const JcvPcaResult& result, const BaselineReport& baseline,
                             ThresholdRule rule = ThresholdRule::mean_std);
SignificanceVerdict classify(std::span<const JsvCrpResult> results, const BaselineReport& baseline,
                             ThresholdRule rule = ThresholdRule::mean_std);

nlohmann::json to_json(const BaselineReport& report);
BaselineReport baseline_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const SignificanceVerdict& verdict);
SignificanceVerdict verdict_from_json(const nlohmann::json& doc);

}  // namespace coordkit
