#include "cli.hpp"

#include "coordkit/error.hpp"
#include "coordkit/jcvpca.hpp"
#include "coordkit/jsvcrp.hpp"
#include "coordkit/report.hpp"
#include "coordkit/version.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>

namespace coordkit::cli {

namespace fs = std::filesystem;

namespace {

bool is_input_error(const std::exception& e) {
    return dynamic_cast<const SchemaError*>(&e) || dynamic_cast<const ValidationError*>(&e) ||
           dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const IoError*>(&e);
}

template <class Body>
int guarded(std::ostream& err, Body&& body) {
    try {
        return body();
    } catch (const std::exception& e) {
        const bool input = is_input_error(e);
        err << "coordkit: " << (input ? "input error: " : "computation error: ") << e.what() << '\n';
        return input ? kExitInput : kExitCompute;
    }
}

void write_file(const fs::path& file, const std::string& text) {
    std::ofstream f(file, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write " + file.string());
    f << text;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
}

// m and p against the joint count; violations are configuration errors.
void check_dimensions(const RunConfig& config, std::size_t n) {
    const int m = config.effective_m();
    if (config.p < 1) throw ConfigError("--p must be >= 1");
    if (m < config.p || m > static_cast<int>(n)) {
        throw ConfigError("need p <= m <= n, got p = " + std::to_string(config.p) + ", m = " +
                          std::to_string(m) + ", n = " + std::to_string(n));
    }
    if (n < 2) throw ConfigError("at least 2 joints are required");
}

BaselineOptions baseline_options(const RunConfig& config) {
    BaselineOptions o;
    o.n_splits = config.n_splits;
    o.seed = config.seed;
    o.m = config.effective_m();
    o.p = config.p;
    o.grid_size = config.grid;
    o.crp = config.crp;
    o.threads = config.threads;
    return o;
}

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

}  // namespace

int cmd_simulate(const SimulateConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto& s = config.sim;
        auto pair = generate_simulated(s);
        write_dataset(config.out_dir / "sim_A", pair.a);
        write_dataset(config.out_dir / "sim_B", pair.b);
        out << "simulated datasets written to " << (config.out_dir / "sim_A").string() << " and "
            << (config.out_dir / "sim_B").string() << '\n'
            << "  amplitude " << s.amplitude << ", angular frequency " << s.angular_frequency
            << " rad/s, duration " << s.duration << " s, samples " << s.samples << '\n'
            << "  noise sigma " << s.noise_sigma << ", repetitions " << s.repetitions << ", seed "
            << s.seed << '\n'
            << "  theta2 phase: A " << s.phase_a << " rad, B " << s.phase_b << " rad\n";
        return kExitOk;
    });
}

int cmd_compare(const RunConfig& config, std::ostream& out, std::ostream& err) {
    std::optional<Dataset> ref;
    std::optional<Dataset> cmp;
    int status = guarded(err, [&] {
        ref = load_dataset(config.reference_dir, config.unit);
        cmp = load_dataset(config.comparison_dir, config.unit);
        if (ref->joints() != cmp->joints()) {
            throw SchemaError("joint lists differ between " + config.reference_dir.string() + " and " +
                              config.comparison_dir.string());
        }
        check_dimensions(config, ref->joint_count());
        if (config.baseline == BaselineMode::on && ref->rep_count() < 4) {
            throw ValidationError("baseline needs at least 4 reference repetitions, found " +
                                  std::to_string(ref->rep_count()));
        }
        (void)NormalizedGrid(config.grid);
        return kExitOk;
    });
    if (status != kExitOk) return status == kExitCompute ? kExitInput : status;

    return guarded(err, [&] {
        const NormalizedGrid grid(config.grid);
        AnalysisReport report;
        report.metadata.reference_name = ref->name();
        report.metadata.comparison_name = cmp->name();
        report.metadata.joints = ref->joints();
        report.metadata.unit = config.unit;
        report.metadata.m = config.effective_m();
        report.metadata.p = config.p;
        report.metadata.grid_size = config.grid;
        report.metadata.version = kVersion;
        report.metadata.conventions = conventions_for(config.crp);

        report.jcvpca = compute_jcvpca(*ref, *cmp, {config.effective_m(), config.p, true});
        report.jsvcrp = jsvcrp_all_pairs(*ref, *cmp, grid, config.crp);

        const bool want_baseline = config.baseline == BaselineMode::on ||
                                   (config.baseline == BaselineMode::automatic && ref->rep_count() >= 4);
        if (want_baseline) {
            report.baseline = shuffle_split_baseline(*ref, baseline_options(config));
            report.jcvpca_verdict = classify(report.jcvpca, *report.baseline, config.rule);
            report.jsvcrp_verdict = classify(report.jsvcrp, *report.baseline, config.rule);
        }

        ensure_dir(config.out_dir);
        write_file(config.out_dir / "report.json", render_json(report));
        export_plot_data(report, config.out_dir);
        out << render_summary(report);
        if (!want_baseline) out << "(baseline skipped: reference has fewer than 4 repetitions)\n";
        out << "report written to " << (config.out_dir / "report.json").string() << '\n';
        return kExitOk;
    });
}

int cmd_baseline(const RunConfig& config, std::ostream& out, std::ostream& err) {
    std::optional<Dataset> ref;
    int status = guarded(err, [&] {
        ref = load_dataset(config.reference_dir, config.unit);
        check_dimensions(config, ref->joint_count());
        if (ref->rep_count() < 4) {
            throw ValidationError("baseline needs at least 4 repetitions, found " +
                                  std::to_string(ref->rep_count()));
        }
        (void)NormalizedGrid(config.grid);
        return kExitOk;
    });
    if (status != kExitOk) return status == kExitCompute ? kExitInput : status;

    return guarded(err, [&] {
        const auto report = shuffle_split_baseline(*ref, baseline_options(config));
        ensure_dir(config.out_dir);
        write_file(config.out_dir / "baseline.json", to_json(report).dump(2) + "\n");

        out << "baseline for " << report.dataset_name << ": splits " << report.n_splits << ", seed "
            << report.seed << ", m " << report.m << ", p " << report.p << '\n';
        for (auto rule : {ThresholdRule::mean_std, ThresholdRule::mean_sem}) {
            const bool use_std = rule == ThresholdRule::mean_std;
            out << "JcvPCA mean +/- " << to_string(rule) << '\n';
            const auto& band = use_std ? report.jcvpca_std : report.jcvpca_sem;
            for (Eigen::Index u = 0; u < report.jcvpca_mean.rows(); ++u) {
                out << "  PC" << u + 1;
                for (Eigen::Index i = 0; i < report.jcvpca_mean.cols(); ++i) {
                    out << "  " << report.joints[static_cast<std::size_t>(i)] << ' '
                        << fmt("%.4f", report.jcvpca_mean(u, i)) << " +/- " << fmt("%.4f", band(u, i));
                }
                out << '\n';
            }
            out << "JsvCRP mean +/- " << to_string(rule) << " (deg x normalized time)\n";
            const auto& area_band = use_std ? report.jsvcrp_std : report.jsvcrp_sem;
            for (std::size_t q = 0; q < report.pairs.size(); ++q) {
                out << "  " << report.joints[report.pairs[q].first] << '-'
                    << report.joints[report.pairs[q].second] << ' ' << fmt("%.4f", report.jsvcrp_mean[q])
                    << " +/- " << fmt("%.4f", area_band[q]) << '\n';
            }
        }
        out << "baseline written to " << (config.out_dir / "baseline.json").string() << '\n';
        return kExitOk;
    });
}

std::vector<std::pair<std::string, std::string>> read_config_file(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot read config file " + file.string());
    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    std::size_t number = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++number;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty() || line.front() == '[') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(file.string() + ":" + std::to_string(number) + ": expected key=value");
        }
        auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
            value = value.substr(1, value.size() - 2);
        }
        if (key.starts_with("--")) key.erase(0, 2);
        entries.emplace_back(std::move(key), std::move(value));
    }
    return entries;
}

namespace {

// Splices config-file entries into the argument list right after the
// subcommand, skipping any flag the command line already sets.
std::vector<std::string> apply_config(const std::vector<std::string>& args) {
    std::optional<std::string> config_file;
    std::set<std::string> given;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const auto& a = args[i];
        if (!a.starts_with("--")) continue;
        auto name = a.substr(2);
        if (auto eq = name.find('='); eq != std::string::npos) {
            if (name.substr(0, eq) == "config") config_file = name.substr(eq + 1);
            name.erase(eq);
        } else if (name == "config" && i + 1 < args.size()) {
            config_file = args[i + 1];
        }
        given.insert(name);
    }
    if (!config_file) return args;

    std::vector<std::string> injected;
    for (auto& [key, value] : read_config_file(*config_file)) {
        if (key == "config" || given.contains(key)) continue;
        injected.push_back("--" + key);
        if (value != "true") injected.push_back(value);
    }
    std::vector<std::string> out;
    auto sub = std::find_if(args.begin(), args.end(), [](const std::string& a) { return !a.starts_with("-"); });
    if (sub == args.end()) return args;
    out.assign(args.begin(), sub + 1);
    out.insert(out.end(), injected.begin(), injected.end());
    out.insert(out.end(), sub + 1, args.end());
    return out;
}

void add_shared_options(CLI::App* cmd, RunConfig& cfg, std::string& unit, std::string& rule,
                        std::string& align, std::string& velocity, bool comparison) {
    cmd->add_option("--ref", cfg.reference_dir, "Reference dataset directory (plays A)")->required();
    if (comparison) {
        cmd->add_option("--cmp", cfg.comparison_dir, "Comparison dataset directory (plays B)")->required();
    }
    cmd->add_option("--unit", unit, "Angle unit of the CSV files")->check(CLI::IsMember({"deg", "rad"}));
    cmd->add_option("--p", cfg.p, "Task dimensionality");
    cmd->add_option("--m", cfg.m, "Retained principal components (default p+1)");
    cmd->add_option("--grid", cfg.grid, "Normalized time grid size");
    cmd->add_option("--seed", cfg.seed, "Seed for baseline splits");
    cmd->add_option("--splits", cfg.n_splits, "Number of baseline splits");
    cmd->add_option("--rule", rule, "Threshold rule")->check(CLI::IsMember({"std", "sem"}));
    cmd->add_option("--out", cfg.out_dir, "Output directory");
    cmd->add_option("--align", align, "Time alignment before CRP")->check(CLI::IsMember({"linear", "dtw"}));
    cmd->add_option("--velocity", velocity, "Differentiation scheme")
        ->check(CLI::IsMember({"central", "forward"}));
    cmd->add_option("--smooth", cfg.crp.velocity.smoothing_window, "Moving-average window (odd, 1 = off)");
    cmd->add_option("--threads", cfg.threads, "Worker threads for baseline splits (0 = auto)");
    cmd->add_option("--config", "key=value file mirroring these flags (flags win)");
}

void finish_shared(RunConfig& cfg, const std::string& unit, const std::string& rule,
                   const std::string& align, const std::string& velocity) {
    cfg.unit = parse_angle_unit(unit);
    cfg.rule = parse_threshold_rule(rule);
    cfg.crp.alignment = align == "dtw" ? TimeAlignment::dtw : TimeAlignment::linear;
    cfg.crp.velocity.method =
        velocity == "forward" ? DiffMethod::forward_difference : DiffMethod::central_difference;
    if (cfg.crp.velocity.smoothing_window < 1 || cfg.crp.velocity.smoothing_window % 2 == 0) {
        throw ConfigError("--smooth must be a positive odd number");
    }
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    try {
        args = apply_config(raw_args);
    } catch (const Error& e) {
        err << "coordkit: input error: " << e.what() << '\n';
        return kExitInput;
    }

    CLI::App app{"Inter-joint coordination change metrics (JcvPCA, JsvCRP)", "coordkit"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    SimulateConfig sim;
    auto* simulate = app.add_subcommand("simulate", "Write the two-joint sine validation datasets");
    simulate->add_option("--out", sim.out_dir, "Directory receiving sim_A/ and sim_B/");
    simulate->add_option("--amplitude", sim.sim.amplitude, "Amplitude of theta1");
    simulate->add_option("--omega", sim.sim.angular_frequency, "Angular frequency (rad/s)");
    simulate->add_option("--duration", sim.sim.duration, "Duration (s)");
    simulate->add_option("--samples", sim.sim.samples, "Samples per repetition");
    simulate->add_option("--noise", sim.sim.noise_sigma, "Gaussian noise sigma");
    simulate->add_option("--reps", sim.sim.repetitions, "Repetitions per dataset");
    simulate->add_option("--seed", sim.sim.seed, "Noise seed");
    simulate->add_option("--config", "key=value file mirroring these flags (flags win)");

    RunConfig compare_cfg;
    std::string c_unit = "deg", c_rule = "std", c_align = "linear", c_vel = "central";
    auto* compare = app.add_subcommand("compare", "Compare a comparison dataset against a reference");
    add_shared_options(compare, compare_cfg, c_unit, c_rule, c_align, c_vel, true);
    std::string c_baseline = "auto";
    compare->add_option("--baseline", c_baseline, "Natural-variability baseline on the reference")
        ->check(CLI::IsMember({"auto", "on", "off"}));

    RunConfig baseline_cfg;
    std::string b_unit = "deg", b_rule = "std", b_align = "linear", b_vel = "central";
    auto* baseline = app.add_subcommand("baseline", "Shuffle-split natural variability of one dataset");
    add_shared_options(baseline, baseline_cfg, b_unit, b_rule, b_align, b_vel, false);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "coordkit: " << e.what() << '\n';
        return kExitInput;
    }

    try {
        if (compare->parsed()) {
            finish_shared(compare_cfg, c_unit, c_rule, c_align, c_vel);
            compare_cfg.baseline = c_baseline == "on"    ? BaselineMode::on
                                   : c_baseline == "off" ? BaselineMode::off
                                                         : BaselineMode::automatic;
        }
        if (baseline->parsed()) finish_shared(baseline_cfg, b_unit, b_rule, b_align, b_vel);
    } catch (const Error& e) {
        err << "coordkit: input error: " << e.what() << '\n';
        return kExitInput;
    }

    if (simulate->parsed()) return cmd_simulate(sim, out, err);
    if (compare->parsed()) return cmd_compare(compare_cfg, out, err);
    return cmd_baseline(baseline_cfg, out, err);
}

}  // namespace coordkit::cli
