#include "coordkit/dataset.hpp"

#include "coordkit/error.hpp"
#include "coordkit/numfmt.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace coordkit {

namespace fs = std::filesystem;

std::string_view to_string(AngleUnit unit) {
    return unit == AngleUnit::deg ? "deg" : "rad";
}

AngleUnit parse_angle_unit(std::string_view text) {
    if (text == "deg") return AngleUnit::deg;
    if (text == "rad") return AngleUnit::rad;
    throw ConfigError("unknown angle unit '" + std::string(text) + "' (expected deg or rad)");
}

Repetition::Repetition(std::vector<double> time, Eigen::MatrixXd angles)
    : time_(std::move(time)), angles_(std::move(angles)) {
    if (static_cast<Eigen::Index>(time_.size()) != angles_.rows()) {
        throw ValidationError("repetition has " + std::to_string(time_.size()) +
                              " time stamps but " + std::to_string(angles_.rows()) +
                              " angle rows");
    }
    if (time_.size() < 3) {
        throw ValidationError("repetition needs at least 3 samples, got " +
                              std::to_string(time_.size()));
    }
    if (angles_.cols() < 1) throw ValidationError("repetition has no joints");
    for (std::size_t r = 0; r < time_.size(); ++r) {
        if (!std::isfinite(time_[r])) {
            throw ValidationError("non-finite time at row " + std::to_string(r));
        }
        if (r > 0 && !(time_[r] > time_[r - 1])) {
            throw ValidationError("time not strictly increasing at row " + std::to_string(r));
        }
    }
    if (!angles_.allFinite()) {
        for (Eigen::Index r = 0; r < angles_.rows(); ++r) {
            if (!angles_.row(r).allFinite()) {
                throw ValidationError("non-finite angle at row " + std::to_string(r));
            }
        }
    }
}

std::vector<double> Repetition::joint(Eigen::Index index) const {
    std::vector<double> out(static_cast<std::size_t>(angles_.rows()));
    Eigen::Map<Eigen::VectorXd>(out.data(), angles_.rows()) = angles_.col(index);
    return out;
}

Dataset::Dataset(std::string name, std::vector<std::string> joints,
                 std::vector<Repetition> reps, AngleUnit unit)
    : name_(std::move(name)), joints_(std::move(joints)), reps_(std::move(reps)), unit_(unit) {
    if (reps_.empty()) throw ValidationError("dataset '" + name_ + "': no repetitions found");
    if (joints_.empty()) throw ValidationError("dataset '" + name_ + "': no joints");
    for (std::size_t r = 0; r < reps_.size(); ++r) {
        if (reps_[r].joints() != static_cast<Eigen::Index>(joints_.size())) {
            throw ValidationError("dataset '" + name_ + "': repetition " + std::to_string(r) +
                                  " has " + std::to_string(reps_[r].joints()) +
                                  " joints, expected " + std::to_string(joints_.size()));
        }
    }
}

Eigen::Index Dataset::total_samples() const {
    Eigen::Index total = 0;
    for (const auto& rep : reps_) total += rep.samples();
    return total;
}

std::size_t Dataset::joint_index(std::string_view label) const {
    auto it = std::find(joints_.begin(), joints_.end(), label);
    if (it == joints_.end()) {
        throw ParameterError("dataset '" + name_ + "' has no joint '" + std::string(label) + "'");
    }
    return static_cast<std::size_t>(it - joints_.begin());
}

Eigen::MatrixXd Dataset::concatenated() const {
    Eigen::MatrixXd out(total_samples(), static_cast<Eigen::Index>(joints_.size()));
    Eigen::Index row = 0;
    for (const auto& rep : reps_) {
        out.middleRows(row, rep.samples()) = rep.angles();
        row += rep.samples();
    }
    return out;
}

Dataset Dataset::with_reps(std::string name, std::vector<Repetition> reps) const {
    return Dataset(std::move(name), joints_, std::move(reps), unit_);
}

void require_compatible(const Dataset& a, const Dataset& b) {
    if (a.joints() != b.joints()) {
        throw ParameterError("datasets '" + a.name() + "' and '" + b.name() +
                             "' have different joint lists");
    }
    if (a.unit() != b.unit()) {
        throw ParameterError("datasets '" + a.name() + "' and '" + b.name() +
                             "' use different angle units");
    }
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        auto comma = line.find(',', start);
        fields.push_back(line.substr(start, comma == std::string_view::npos ? line.npos
                                                                            : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace

Repetition read_repetition_csv(const fs::path& file, std::vector<std::string>& joints) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open " + file.string());

    std::string line;
    if (!std::getline(in, line)) throw SchemaError(file.string() + ": empty file, header missing");
    std::string_view header = line;
    if (header.starts_with("\xEF\xBB\xBF")) header.remove_prefix(3);
    auto names = split_fields(trim(header));
    if (names.size() < 2 || trim(names[0]) != "time") {
        throw SchemaError(file.string() + ": header must start with 'time' followed by joint columns");
    }
    joints.clear();
    for (std::size_t c = 1; c < names.size(); ++c) {
        auto name = trim(names[c]);
        if (name.empty()) throw SchemaError(file.string() + ": empty joint name in header");
        joints.emplace_back(name);
    }

    const std::size_t n = joints.size();
    std::vector<double> time;
    std::vector<double> values;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        auto content = trim(line);
        if (content.empty()) continue;
        auto fields = split_fields(content);
        if (fields.size() != n + 1) {
            throw SchemaError(file.string() + ": data row " + std::to_string(row) + " has " +
                              std::to_string(fields.size()) + " fields, expected " +
                              std::to_string(n + 1));
        }
        for (std::size_t c = 0; c < fields.size(); ++c) {
            double v = 0.0;
            if (!parse_double(fields[c], v)) {
                throw ValidationError(file.string() + ": unparsable value '" +
                                      std::string(fields[c]) + "' at row " + std::to_string(row));
            }
            if (!std::isfinite(v)) {
                throw ValidationError(file.string() + ": non-finite value at row " +
                                      std::to_string(row));
            }
            (c == 0 ? time : values).push_back(v);
        }
        ++row;
    }

    Eigen::MatrixXd angles(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < row; ++r)
        for (std::size_t c = 0; c < n; ++c)
            angles(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = values[r * n + c];
    try {
        return Repetition(std::move(time), std::move(angles));
    } catch (const ValidationError& e) {
        throw ValidationError(file.string() + ": " + e.what());
    }
}

Dataset load_dataset(const fs::path& root, AngleUnit unit) {
    if (!fs::is_directory(root)) throw IoError(root.string() + " is not a directory");

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(root)) {
        if (entry.is_regular_file() && entry.path().extension() == ".csv") {
            files.push_back(entry.path());
        }
    }
    if (files.empty()) throw ValidationError(root.string() + ": no repetitions found");
    std::sort(files.begin(), files.end());

    std::vector<std::string> joints;
    std::vector<Repetition> reps;
    for (const auto& file : files) {
        std::vector<std::string> header;
        auto rep = read_repetition_csv(file, header);
        if (reps.empty()) {
            joints = header;
        } else if (header != joints) {
            throw SchemaError(file.string() + ": header does not match " + files.front().string());
        }
        reps.push_back(std::move(rep));
    }

    auto name = root.filename().string();
    if (name.empty()) name = root.parent_path().filename().string();
    return Dataset(name, std::move(joints), std::move(reps), unit);
}

void write_repetition_csv(const fs::path& file, const Repetition& rep,
                          std::span<const std::string> joints) {
    std::ostringstream out;
    out << "time";
    for (const auto& j : joints) out << ',' << j;
    out << '\n';
    const auto& angles = rep.angles();
    for (Eigen::Index r = 0; r < rep.samples(); ++r) {
        out << format_double(rep.time()[static_cast<std::size_t>(r)]);
        for (Eigen::Index c = 0; c < angles.cols(); ++c) out << ',' << format_double(angles(r, c));
        out << '\n';
    }
    std::ofstream f(file, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write " + file.string());
    f << out.str();
    if (!f) throw IoError("write failed for " + file.string());
}

void write_dataset(const fs::path& dir, const Dataset& ds) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    for (std::size_t r = 0; r < ds.rep_count(); ++r) {
        char name[32];
        std::snprintf(name, sizeof name, "rep_%03zu.csv", r);
        write_repetition_csv(dir / name, ds.reps()[r], ds.joints());
    }
}

Dataset center_dataset(const Dataset& ds) {
    const Eigen::RowVectorXd mean = ds.concatenated().colwise().mean();
    std::vector<Repetition> reps;
    reps.reserve(ds.rep_count());
    for (const auto& rep : ds.reps()) {
        Eigen::MatrixXd centered = rep.angles().rowwise() - mean;
        reps.emplace_back(rep.time(), std::move(centered));
    }
    return ds.with_reps(ds.name(), std::move(reps));
}

}  // namespace coordkit
