#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace shapesim {

/// Labeled N x N symmetric dissimilarity (or distance) matrix.
struct DissimilarityMatrix {
    std::vector<std::string> labels;
    Eigen::MatrixXd entries;
    // Largest |s(i,j) - s(j,i)| seen before symmetrization; 0 when the matrix
    // was not produced by scoring.
    double asymmetry = 0.0;

    Eigen::Index size() const noexcept { return entries.rows(); }
};

}  // namespace shapesim
