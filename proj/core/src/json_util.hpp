#pragma once

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <vector>

namespace coordkit::detail {

inline nlohmann::json vector_json(const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

inline Eigen::VectorXd vector_from(const nlohmann::json& j) {
    auto values = j.get<std::vector<double>>();
    return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

// Row-major array of arrays.
inline nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(vector_json(m.row(r).transpose()));
    return rows;
}

inline Eigen::MatrixXd matrix_from(const nlohmann::json& j) {
    if (j.empty()) return {};
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) m.row(r) = vector_from(j[static_cast<std::size_t>(r)]).transpose();
    return m;
}

}  // namespace coordkit::detail
