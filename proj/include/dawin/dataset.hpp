#pragma once

#include <Eigen/Dense>

#include <vector>

namespace dawin {

// Feature rows with optional labels. Unlabeled data has an empty label vector.
struct LabeledData {
    Eigen::MatrixXd features;  // N x d
    std::vector<int> labels;   // N entries, or empty when unlabeled

    Eigen::Index size() const noexcept { return features.rows(); }
    Eigen::Index dim() const noexcept { return features.cols(); }
    bool has_labels() const noexcept { return !labels.empty(); }
};

}  // namespace dawin
