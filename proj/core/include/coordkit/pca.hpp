#pragma once

#include "coordkit/dataset.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace coordkit {

struct SymmetricEigen {
    Eigen::VectorXd values;   // descending
    Eigen::MatrixXd vectors;  // columns, matching `values`
};

/// Cyclic Jacobi eigendecomposition of a small symmetric matrix. Equal
/// eigenvalues are ordered by the joint index of their eigenvector's largest
/// |entry|.
SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& symmetric);

// Flips `row` so that its entry of largest magnitude is non-negative (first
// such entry on exact ties).
void apply_sign_convention(Eigen::Ref<Eigen::RowVectorXd> row);

/// Principal components of a sample matrix. Rows of `components` are the unit
/// eigenvectors of the covariance (1/(N-1)), largest eigenvalue first.
struct PcaModel {
    Eigen::VectorXd mean;                      // n
    Eigen::MatrixXd components;                // m x n
    Eigen::VectorXd eigenvalues;               // m, covariance eigenvalues
    Eigen::VectorXd explained_variance_ratio;  // m, eigenvalue / total variance
    Eigen::Index sample_count = 0;
    std::vector<std::string> warnings;

    Eigen::Index retained() const { return components.rows(); }
    Eigen::Index dimension() const { return components.cols(); }
};

// Relative gap below which the m-th and (m+1)-th eigenvalues are reported as
// a near-tie.
inline constexpr double kEigenTieTolerance = 0.10;

/// Samples are rows. Data are centered but not variance-scaled. Throws
/// ParameterError for m outside [1, n]; attaches warnings for a near-tie at
/// the retained boundary and for fewer than 10 samples per variable.
PcaModel fit_pca(const Eigen::MatrixXd& samples, Eigen::Index m);
PcaModel fit_pca(const Dataset& ds, Eigen::Index m);

// Scores of each row after subtracting the model mean: (x - mean) * C^T.
Eigen::MatrixXd project(const Eigen::MatrixXd& samples, const PcaModel& model);

// Dataset of PC scores with joints named PC1..PCm.
Dataset project(const Dataset& ds, const PcaModel& model);

// scores * C + mean.
Eigen::MatrixXd inverse_project(const Eigen::MatrixXd& scores, const PcaModel& model);

nlohmann::json to_json(const PcaModel& model);
PcaModel pca_model_from_json(const nlohmann::json& doc);

}  // namespace coordkit
