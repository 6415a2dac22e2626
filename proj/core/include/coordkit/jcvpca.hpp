#pragma once

#include "coordkit/dataset.hpp"
#include "coordkit/pca.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace coordkit {

/// Joint Reprojection Weights of the reference (A) and comparison (B)
/// datasets, both expressed over the original joints.
struct JrwMatrices {
    Eigen::MatrixXd jrw_a;  // m x n, |a_ui|
    Eigen::MatrixXd jrw_b;  // m x n, |b^A_ui|
    Eigen::VectorXd explained_variance_a;
    Eigen::VectorXd explained_variance_b;
    PcaModel model_a;            // fitted on A
    PcaModel model_b_projected;  // fitted on B's scores in A's frame (m x m)
    Eigen::MatrixXd signed_b;    // b * R^A before taking absolute values
};

/// Fits PCA on A, projects B into A's frame (centered with A's mean), re-fits
/// PCA on the projected scores and composes the result back onto the joints.
JrwMatrices compute_jrw(const Dataset& a, const Dataset& b, Eigen::Index m);

struct JcvPcaOptions {
    Eigen::Index m = 2;  // retained components
    Eigen::Index p = 1;  // task dimensionality
    bool weighted = true;
};

struct JcvPcaResult {
    // delta = jrw_b - jrw_a: positive means the joint contributes more in B.
    Eigen::MatrixXd delta;
    std::optional<Eigen::MatrixXd> weighted_delta;  // rows scaled by A's explained variance
    JrwMatrices jrw;
    std::string reference_name;
    std::string comparison_name;
    std::vector<std::string> joints;
    Eigen::Index m = 0;
    Eigen::Index p = 0;
    std::vector<std::string> warnings;
};

JcvPcaResult compute_jcvpca(const Dataset& a, const Dataset& b, const JcvPcaOptions& options);

enum class RowFocus { task, null_space };

struct RowSelection {
    std::vector<Eigen::Index> rows;  // zero-based PC indices
    Eigen::MatrixXd values;          // selected rows of delta
    std::optional<std::string> warning;
};

// task -> PCs 1..p, null_space -> PCs p+1..m.
RowSelection select_rows(const JcvPcaResult& result, RowFocus focus);

// delta * 100 rounded to the nearest integer, for human-readable summaries.
int percent_change(double delta);

}  // namespace coordkit
