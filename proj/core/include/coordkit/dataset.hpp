#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace coordkit {

enum class AngleUnit { deg, rad };

std::string_view to_string(AngleUnit unit);
AngleUnit parse_angle_unit(std::string_view text);

/// One movement: strictly increasing time stamps (seconds) and a T x n matrix
/// of joint angles. Validated on construction and immutable afterwards.
class Repetition {
public:
    Repetition(std::vector<double> time, Eigen::MatrixXd angles);

    const std::vector<double>& time() const { return time_; }
    const Eigen::MatrixXd& angles() const { return angles_; }

    Eigen::Index samples() const { return angles_.rows(); }
    Eigen::Index joints() const { return angles_.cols(); }
    double duration() const { return time_.back() - time_.front(); }

    // Copy of one joint's series.
    std::vector<double> joint(Eigen::Index index) const;

private:
    std::vector<double> time_;
    Eigen::MatrixXd angles_;
};

/// Named collection of repetitions sharing the same joint labels and unit.
/// Whether it plays the reference or the comparison role is decided by the
/// caller of each metric.
class Dataset {
public:
    Dataset(std::string name, std::vector<std::string> joints,
            std::vector<Repetition> reps, AngleUnit unit = AngleUnit::deg);

    const std::string& name() const { return name_; }
    const std::vector<std::string>& joints() const { return joints_; }
    const std::vector<Repetition>& reps() const { return reps_; }
    AngleUnit unit() const { return unit_; }

    std::size_t joint_count() const { return joints_.size(); }
    std::size_t rep_count() const { return reps_.size(); }
    Eigen::Index total_samples() const;

    // Joint index by label; throws ParameterError when absent.
    std::size_t joint_index(std::string_view label) const;

    // All samples of all repetitions stacked row-wise, in repetition order.
    Eigen::MatrixXd concatenated() const;

    // Same joints and unit, different repetitions.
    Dataset with_reps(std::string name, std::vector<Repetition> reps) const;

private:
    std::string name_;
    std::vector<std::string> joints_;
    std::vector<Repetition> reps_;
    AngleUnit unit_;
};

// Throws ParameterError unless both datasets carry the same joint list and
// angle unit.
void require_compatible(const Dataset& a, const Dataset& b);

/// Reads every `*.csv` in `root` (lexicographic order, one repetition per
/// file). Header must be `time,<joint1>,...`, identical across files. The
/// dataset is named after the directory.
Dataset load_dataset(const std::filesystem::path& root, AngleUnit unit);

// Single-file reader used by load_dataset; `joints` receives the header.
Repetition read_repetition_csv(const std::filesystem::path& file,
                               std::vector<std::string>& joints);

void write_repetition_csv(const std::filesystem::path& file, const Repetition& rep,
                          std::span<const std::string> joints);

// Writes rep_000.csv, rep_001.csv, ... into `dir` (created if needed).
void write_dataset(const std::filesystem::path& dir, const Dataset& ds);

/// Subtracts each joint's mean, taken over the concatenation of all samples
/// of all repetitions.
Dataset center_dataset(const Dataset& ds);

}  // namespace coordkit
