#include "coordkit/report.hpp"

#include "coordkit/error.hpp"
#include "coordkit/numfmt.hpp"
#include "json_util.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace coordkit {

namespace fs = std::filesystem;
using nlohmann::json;

Conventions conventions_for(const CrpOptions& options) {
    Conventions c;
    c.time_alignment = options.alignment == TimeAlignment::dtw ? "dtw" : "linear";
    c.velocity = options.velocity.method == DiffMethod::central_difference ? "central_difference"
                                                                           : "forward_difference";
    c.smoothing_window = options.velocity.smoothing_window;
    return c;
}

namespace {

json conventions_json(const Conventions& c) {
    return {
        {"centering", c.centering},
        {"subtraction", c.subtraction},
        {"eigenvector_sign", c.eigenvector_sign},
        {"crp_sign", c.crp_sign},
        {"integration_axis", c.integration_axis},
        {"weighting", c.weighting},
        {"time_alignment", c.time_alignment},
        {"velocity", c.velocity},
        {"smoothing_window", c.smoothing_window},
        {"unwrapping", c.unwrapping},
    };
}

Conventions conventions_from(const json& j) {
    Conventions c;
    c.centering = j.at("centering").get<std::string>();
    c.subtraction = j.at("subtraction").get<std::string>();
    c.eigenvector_sign = j.at("eigenvector_sign").get<std::string>();
    c.crp_sign = j.at("crp_sign").get<std::string>();
    c.integration_axis = j.at("integration_axis").get<std::string>();
    c.weighting = j.at("weighting").get<std::string>();
    c.time_alignment = j.at("time_alignment").get<std::string>();
    c.velocity = j.at("velocity").get<std::string>();
    c.smoothing_window = j.at("smoothing_window").get<int>();
    c.unwrapping = j.at("unwrapping").get<bool>();
    return c;
}

json jcvpca_json(const JcvPcaResult& r) {
    using namespace detail;
    return {
        {"reference", r.reference_name},
        {"comparison", r.comparison_name},
        {"joints", r.joints},
        {"m", r.m},
        {"p", r.p},
        {"delta", matrix_json(r.delta)},
        {"weighted_delta", r.weighted_delta ? matrix_json(*r.weighted_delta) : json(nullptr)},
        {"jrw_a", matrix_json(r.jrw.jrw_a)},
        {"jrw_b", matrix_json(r.jrw.jrw_b)},
        {"signed_b", matrix_json(r.jrw.signed_b)},
        {"explained_variance_a", vector_json(r.jrw.explained_variance_a)},
        {"explained_variance_b", vector_json(r.jrw.explained_variance_b)},
        {"model_a", to_json(r.jrw.model_a)},
        {"model_b_projected", to_json(r.jrw.model_b_projected)},
        {"warnings", r.warnings},
    };
}

JcvPcaResult jcvpca_from(const json& j) {
    using namespace detail;
    JcvPcaResult r;
    r.reference_name = j.at("reference").get<std::string>();
    r.comparison_name = j.at("comparison").get<std::string>();
    r.joints = j.at("joints").get<std::vector<std::string>>();
    r.m = j.at("m").get<Eigen::Index>();
    r.p = j.at("p").get<Eigen::Index>();
    r.delta = matrix_from(j.at("delta"));
    if (!j.at("weighted_delta").is_null()) r.weighted_delta = matrix_from(j.at("weighted_delta"));
    r.jrw.jrw_a = matrix_from(j.at("jrw_a"));
    r.jrw.jrw_b = matrix_from(j.at("jrw_b"));
    r.jrw.signed_b = matrix_from(j.at("signed_b"));
    r.jrw.explained_variance_a = vector_from(j.at("explained_variance_a"));
    r.jrw.explained_variance_b = vector_from(j.at("explained_variance_b"));
    r.jrw.model_a = pca_model_from_json(j.at("model_a"));
    r.jrw.model_b_projected = pca_model_from_json(j.at("model_b_projected"));
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    return r;
}

json curve_json(const CrpCurve& c) {
    return {{"values", c.values}, {"n_reps", c.n_reps_averaged}, {"flags", c.flags}};
}

CrpCurve curve_from(const json& j, std::size_t first, std::size_t second, std::size_t grid_size) {
    CrpCurve c{first, second, NormalizedGrid(grid_size), {}, 0, {}};
    c.values = j.at("values").get<std::vector<double>>();
    c.n_reps_averaged = j.at("n_reps").get<std::size_t>();
    c.flags = j.at("flags").get<std::vector<std::string>>();
    return c;
}

json jsvcrp_json(const JsvCrpResult& r, const std::vector<std::string>& joints) {
    return {
        {"pair", {r.first, r.second}},
        {"joints", {joints.at(r.first), joints.at(r.second)}},
        {"area", r.area},
        {"area_percent", r.area_percent},
        {"area_rad", r.area_radians()},
        {"axis_convention", "area: deg x normalized time [0,1]; area_percent: deg x percent [0,100]"},
        {"grid_size", r.curve_a.grid.size()},
        {"flags", r.flags},
        {"curve_a", curve_json(r.curve_a)},
        {"curve_b", curve_json(r.curve_b)},
        {"difference_profile", r.difference_profile},
    };
}

JsvCrpResult jsvcrp_from(const json& j) {
    JsvCrpResult r;
    r.first = j.at("pair")[0].get<std::size_t>();
    r.second = j.at("pair")[1].get<std::size_t>();
    r.area = j.at("area").get<double>();
    r.area_percent = j.at("area_percent").get<double>();
    const auto g = j.at("grid_size").get<std::size_t>();
    r.flags = j.at("flags").get<std::vector<std::string>>();
    r.curve_a = curve_from(j.at("curve_a"), r.first, r.second, g);
    r.curve_b = curve_from(j.at("curve_b"), r.first, r.second, g);
    r.difference_profile = j.at("difference_profile").get<std::vector<double>>();
    return r;
}

void write_text(const fs::path& file, const std::string& text) {
    std::ofstream f(file, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write " + file.string());
    f << text;
    if (!f) throw IoError("write failed for " + file.string());
}

std::string matrix_csv(const Eigen::MatrixXd& m, const std::vector<std::string>& joints) {
    std::ostringstream out;
    out << "component";
    for (const auto& j : joints) out << ',' << j;
    out << '\n';
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        out << "PC" << r + 1;
        for (Eigen::Index c = 0; c < m.cols(); ++c) out << ',' << format_double(m(r, c));
        out << '\n';
    }
    return out.str();
}

std::string signed_percent(double delta) {
    const int pct = percent_change(delta);
    return (pct > 0 ? "+" : "") + std::to_string(pct) + "%";
}

}  // namespace

json to_json(const AnalysisReport& report) {
    const auto& md = report.metadata;
    json jsv = json::array();
    for (const auto& r : report.jsvcrp) jsv.push_back(jsvcrp_json(r, md.joints));

    json verdicts = nullptr;
    if (report.jcvpca_verdict || report.jsvcrp_verdict) {
        verdicts = {
            {"jcvpca", report.jcvpca_verdict ? to_json(*report.jcvpca_verdict) : json(nullptr)},
            {"jsvcrp", report.jsvcrp_verdict ? to_json(*report.jsvcrp_verdict) : json(nullptr)},
        };
    }
    return {
        {"metadata",
         {
             {"reference", md.reference_name},
             {"comparison", md.comparison_name},
             {"joints", md.joints},
             {"unit", to_string(md.unit)},
             {"m", md.m},
             {"p", md.p},
             {"grid_size", md.grid_size},
             {"version", md.version},
             {"conventions", conventions_json(md.conventions)},
         }},
        {"jcvpca", jcvpca_json(report.jcvpca)},
        {"jsvcrp", jsv},
        {"baseline", report.baseline ? to_json(*report.baseline) : json(nullptr)},
        {"verdicts", verdicts},
    };
}

AnalysisReport report_from_json(const json& doc) {
    AnalysisReport r;
    const auto& md = doc.at("metadata");
    r.metadata.reference_name = md.at("reference").get<std::string>();
    r.metadata.comparison_name = md.at("comparison").get<std::string>();
    r.metadata.joints = md.at("joints").get<std::vector<std::string>>();
    r.metadata.unit = parse_angle_unit(md.at("unit").get<std::string>());
    r.metadata.m = md.at("m").get<Eigen::Index>();
    r.metadata.p = md.at("p").get<Eigen::Index>();
    r.metadata.grid_size = md.at("grid_size").get<std::size_t>();
    r.metadata.version = md.at("version").get<std::string>();
    r.metadata.conventions = conventions_from(md.at("conventions"));
    r.jcvpca = jcvpca_from(doc.at("jcvpca"));
    for (const auto& j : doc.at("jsvcrp")) r.jsvcrp.push_back(jsvcrp_from(j));
    if (!doc.at("baseline").is_null()) r.baseline = baseline_from_json(doc.at("baseline"));
    const auto& v = doc.at("verdicts");
    if (!v.is_null()) {
        if (!v.at("jcvpca").is_null()) r.jcvpca_verdict = verdict_from_json(v.at("jcvpca"));
        if (!v.at("jsvcrp").is_null()) r.jsvcrp_verdict = verdict_from_json(v.at("jsvcrp"));
    }
    return r;
}

std::string render_json(const AnalysisReport& report) {
    return to_json(report).dump(2) + "\n";
}

std::vector<fs::path> export_plot_data(const AnalysisReport& report, const fs::path& out_dir) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec || !fs::is_directory(out_dir)) {
        throw IoError("cannot create output directory " + out_dir.string() +
                      (ec ? ": " + ec.message() : ""));
    }

    const auto& joints = report.metadata.joints;
    std::vector<fs::path> written;
    auto emit = [&](const std::string& name, const std::string& text) {
        write_text(out_dir / name, text);
        written.push_back(out_dir / name);
    };

    emit("jrw_a.csv", matrix_csv(report.jcvpca.jrw.jrw_a, joints));
    emit("jrw_b.csv", matrix_csv(report.jcvpca.jrw.jrw_b, joints));
    emit("jcvpca_delta.csv", matrix_csv(report.jcvpca.delta, joints));
    if (report.jcvpca.weighted_delta) {
        emit("jcvpca_weighted_delta.csv", matrix_csv(*report.jcvpca.weighted_delta, joints));
    }

    for (const auto& r : report.jsvcrp) {
        std::ostringstream out;
        out << "percent,crp_a_deg,crp_b_deg,abs_diff_deg\n";
        const auto pct = r.curve_a.grid.percent();
        for (std::size_t k = 0; k < pct.size(); ++k) {
            out << format_double(pct[k]) << ',' << format_double(r.curve_a.values[k]) << ','
                << format_double(r.curve_b.values[k]) << ',' << format_double(r.difference_profile[k])
                << '\n';
        }
        emit("crp_pair_" + std::to_string(r.first + 1) + "_" + std::to_string(r.second + 1) + ".csv",
             out.str());
    }

    if (report.baseline) {
        const auto& b = *report.baseline;
        std::ostringstream jc;
        jc << "component,joint,mean,std,sem\n";
        for (Eigen::Index u = 0; u < b.jcvpca_mean.rows(); ++u)
            for (Eigen::Index i = 0; i < b.jcvpca_mean.cols(); ++i)
                jc << "PC" << u + 1 << ',' << b.joints.at(static_cast<std::size_t>(i)) << ','
                   << format_double(b.jcvpca_mean(u, i)) << ',' << format_double(b.jcvpca_std(u, i))
                   << ',' << format_double(b.jcvpca_sem(u, i)) << '\n';
        emit("baseline_jcvpca.csv", jc.str());

        std::ostringstream js;
        js << "pair,mean,std,sem\n";
        for (std::size_t q = 0; q < b.pairs.size(); ++q)
            js << b.joints.at(b.pairs[q].first) << '-' << b.joints.at(b.pairs[q].second) << ','
               << format_double(b.jsvcrp_mean[q]) << ',' << format_double(b.jsvcrp_std[q]) << ','
               << format_double(b.jsvcrp_sem[q]) << '\n';
        emit("baseline_jsvcrp.csv", js.str());
    }
    return written;
}

std::string render_summary(const AnalysisReport& report) {
    const auto& md = report.metadata;
    const auto& r = report.jcvpca;
    std::ostringstream out;
    out << "reference: " << md.reference_name << "  comparison: " << md.comparison_name << '\n';
    out << "m = " << md.m << ", p = " << md.p << ", grid = " << md.grid_size << ", unit = "
        << to_string(md.unit) << '\n';
    out << "JcvPCA (" << md.conventions.subtraction << ")\n";
    for (Eigen::Index u = 0; u < r.delta.rows(); ++u) {
        out << "  PC" << u + 1 << (u < r.p ? " [task]" : " [null space]") << ':';
        for (Eigen::Index i = 0; i < r.delta.cols(); ++i) {
            out << "  " << md.joints.at(static_cast<std::size_t>(i)) << ' ' << signed_percent(r.delta(u, i));
            if (report.jcvpca_verdict) {
                out << (report.jcvpca_verdict->at(u, i) == Verdict::exceeds_variability ? " (exceeds)"
                                                                                        : " (within)");
            }
        }
        out << '\n';
    }
    out << "JsvCRP (" << md.conventions.integration_axis << ")\n";
    char buf[160];
    for (std::size_t q = 0; q < report.jsvcrp.size(); ++q) {
        const auto& s = report.jsvcrp[q];
        std::snprintf(buf, sizeof buf, "  %s-%s: %.4g deg (%.4g rad) normalized, %.4g deg percent",
                      md.joints.at(s.first).c_str(), md.joints.at(s.second).c_str(), s.area,
                      s.area_radians(), s.area_percent);
        out << buf;
        if (report.jsvcrp_verdict) {
            out << (report.jsvcrp_verdict->at(static_cast<Eigen::Index>(q)) == Verdict::exceeds_variability
                        ? " (exceeds)"
                        : " (within)");
        }
        out << '\n';
    }
    if (report.baseline) {
        out << "baseline: " << report.baseline->n_splits << " splits, seed " << report.baseline->seed
            << ", rule mean+/-" << to_string(report.jcvpca_verdict ? report.jcvpca_verdict->rule
                                                                    : ThresholdRule::mean_std)
            << '\n';
    } else {
        out << "baseline: none\n";
    }
    for (const auto& w : r.warnings) out << "warning: " << w << '\n';
    return out.str();
}

}  // namespace coordkit
