#pragma once

#include "coordkit/baseline.hpp"
#include "coordkit/crp.hpp"
#include "coordkit/simulate.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace coordkit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitCompute = 3;

enum class BaselineMode { automatic, on, off };

struct RunConfig {
    std::filesystem::path reference_dir;
    std::filesystem::path comparison_dir;
    AngleUnit unit = AngleUnit::deg;
    int p = 1;
    int m = 0;  // 0: p + 1
    std::size_t grid = NormalizedGrid::kDefaultSize;
    std::uint64_t seed = 0;
    std::size_t n_splits = kDefaultSplits;
    ThresholdRule rule = ThresholdRule::mean_std;
    std::filesystem::path out_dir = "coordkit_out";
    BaselineMode baseline = BaselineMode::automatic;
    CrpOptions crp{};
    unsigned threads = 0;

    int effective_m() const { return m > 0 ? m : p + 1; }
};

struct SimulateConfig {
    SimConfig sim{};
    std::filesystem::path out_dir = ".";
};

// Writes <out>/sim_A and <out>/sim_B.
int cmd_simulate(const SimulateConfig& config, std::ostream& out, std::ostream& err);
// Writes <out>/report.json plus plot CSVs and prints the summary.
int cmd_compare(const RunConfig& config, std::ostream& out, std::ostream& err);
// Writes <out>/baseline.json and prints mean +/- std and mean +/- sem tables.
int cmd_baseline(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses `args` (without the program name) and dispatches. A `--config FILE`
/// of key=value lines supplies defaults for any long flag not given on the
/// command line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// key=value parser; '#' starts a comment, [section] lines are ignored.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::filesystem::path& file);

}  // namespace coordkit::cli
