#pragma once

// Matrix-level measures shared by the clustering and embedding methods.
// Every "norm" here is taken over the strict upper triangle, i.e. once per
// unordered pair of objects.

#include <array>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace shapesim::analysis {

/// Throws DimensionError unless D is square with at least 2 rows, and Error
/// unless it is finite, symmetric (to 1e-9 relative) with a zero diagonal.
void require_dissimilarity(const Eigen::MatrixXd& D);

struct TriangleViolations {
    // (i, j, k) with i < j and D(i,j) > D(i,k) + D(k,j) + eps. Each unordered
    // triple can violate at most once, so this also counts unordered triples.
    std::vector<std::array<Eigen::Index, 3>> triples;
    // Pairs (i, j) for which at least one detour k is shorter.
    std::size_t violating_pairs = 0;
    std::size_t total_pairs = 0;

    std::size_t count() const noexcept { return triples.size(); }
};

/// eps = 1e-9 * max entry.
TriangleViolations triangle_violations(const Eigen::MatrixXd& D);

/// Euclidean distances between the rows of `points`.
Eigen::MatrixXd distances_from_coords(const Eigen::MatrixXd& points);

struct QualityReport {
    double norm_ratio = 0.0;         // 100 ||d|| / ||D||
    double residual_ratio = 0.0;     // 100 ||D - d|| / ||D||
    double pythagoras_defect = 0.0;  // | ||d||^2 + ||D-d||^2 - ||D||^2 | / ||D||^2
};

QualityReport quality(const Eigen::MatrixXd& D, const Eigen::MatrixXd& d);

/// Pearson correlation over strict-upper-triangle entries.
/// Throws UndefinedCorrelationError if either side has zero variance.
double pearson_r(const Eigen::MatrixXd& D, const Eigen::MatrixXd& d);

/// Centres the rows and projects them onto the top-m principal axes.
Eigen::MatrixXd pca_project(const Eigen::MatrixXd& points, Eigen::Index m);

/// Least-squares similarity (scale, rotation, translation) taking `source`
/// rows onto `target` rows.
struct SimilarityFit {
    Eigen::MatrixXd rotation;
    double scale = 1.0;
    Eigen::RowVectorXd translation;
    double rms = 0.0;

    Eigen::MatrixXd apply(const Eigen::MatrixXd& points) const;
};

SimilarityFit fit_similarity(const Eigen::MatrixXd& source, const Eigen::MatrixXd& target,
                             bool allow_reflection = true, bool with_scale = true);

}  // namespace shapesim::analysis
