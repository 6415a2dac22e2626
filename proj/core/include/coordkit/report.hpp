#pragma once

#include "coordkit/baseline.hpp"
#include "coordkit/jcvpca.hpp"
#include "coordkit/jsvcrp.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace coordkit {

// Everything needed to re-derive a result from the same inputs.
struct Conventions {
    std::string centering = "comparison centered with the reference PCA mean";
    std::string subtraction = "delta = |b^A| - |a| (positive: joint used more in comparison)";
    std::string eigenvector_sign = "largest-magnitude entry of each component non-negative";
    std::string crp_sign = "phi_first - phi_second (positive: second joint leads)";
    std::string integration_axis = "area: normalized time [0,1]; area_percent: 0-100 %";
    std::string weighting = "weighted_delta rows scaled by reference explained variance";
    std::string time_alignment = "linear";
    std::string velocity = "central_difference";
    int smoothing_window = 1;
    bool unwrapping = true;
};

struct ReportMetadata {
    std::string reference_name;
    std::string comparison_name;
    std::vector<std::string> joints;
    AngleUnit unit = AngleUnit::deg;
    Eigen::Index m = 0;
    Eigen::Index p = 0;
    std::size_t grid_size = NormalizedGrid::kDefaultSize;
    std::string version;
    Conventions conventions;
};

struct AnalysisReport {
    ReportMetadata metadata;
    JcvPcaResult jcvpca;
    std::vector<JsvCrpResult> jsvcrp;
    std::optional<BaselineReport> baseline;
    std::optional<SignificanceVerdict> jcvpca_verdict;
    std::optional<SignificanceVerdict> jsvcrp_verdict;
};

Conventions conventions_for(const CrpOptions& options);

nlohmann::json to_json(const AnalysisReport& report);
AnalysisReport report_from_json(const nlohmann::json& doc);

/// Canonical machine output: sorted keys, two-space indent, trailing newline.
std::string render_json(const AnalysisReport& report);

/// Plot-transport CSVs: jrw_a, jrw_b, jcvpca_delta (+ weighted), one
/// crp_pair_<i>_<j>.csv per pair (1-based joint numbers) and baseline
/// summaries when present. Returns the files written.
std::vector<std::filesystem::path> export_plot_data(const AnalysisReport& report,
                                                    const std::filesystem::path& out_dir);

// Human-readable summary with signed percentages and verdict tags.
std::string render_summary(const AnalysisReport& report);

}  // namespace coordkit
