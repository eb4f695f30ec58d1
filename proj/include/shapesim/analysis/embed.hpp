#pragma once

// Euclidean embeddings of a dissimilarity matrix:
//  - gmds: minimize raw stress sum_{i<j} (D_ij - d_ij)^2 directly;
//  - torgerson: classical MDS from the double-centred squared matrix;
//  - correlation: maximize the Pearson correlation between D and d.

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace shapesim::analysis {

enum class EmbeddingMethod { gmds, torgerson, correlation };

std::string to_string(EmbeddingMethod method);

struct Embedding {
    Eigen::MatrixXd coords;  // N x n, one row per object
    EmbeddingMethod method = EmbeddingMethod::gmds;
    double stress = std::numeric_limits<double>::quiet_NaN();
    double r = std::numeric_limits<double>::quiet_NaN();

    // Torgerson only.
    int usable_terms = -1;
    Eigen::VectorXd eigenvalues;  // descending
    double negative_mass = 0.0;   // sum of |lambda| over eigenvalues below -eps

    int best_start = -1;
    std::vector<std::string> warnings;
};

struct GmdsOptions {
    int starts = 5;
    int max_iters = 5000;
    double tol = 1e-13;
    int memory = 10;
    std::uint64_t seed = 0;
    // Extra start (index 0) from a previous embedding; columns beyond its
    // width are filled with small seeded noise.
    std::optional<Eigen::MatrixXd> warm_start;
};

/// Raw stress over the strict upper triangle.
double raw_stress(const Eigen::MatrixXd& D, const Eigen::MatrixXd& coords);

/// Raw stress and its analytic gradient with respect to coords. Coincident
/// points contribute a zero subgradient.
double raw_stress_gradient(const Eigen::MatrixXd& D, const Eigen::MatrixXd& coords,
                           Eigen::MatrixXd& grad);

/// Multi-start stress minimization; coordinates are re-centred after every
/// iteration. Throws DimensionError unless 1 <= n < N.
Embedding gmds_embed(const Eigen::MatrixXd& D, int n, const GmdsOptions& opts = {});

/// Classical MDS. Components use eigenvalues above 1e-9 * lambda_1; asking
/// for more than are available truncates the output and records a warning.
Embedding torgerson_embed(const Eigen::MatrixXd& D, int n);

struct CorrelationOptions {
    int starts = 5;
    int max_iters = 5000;
    double tol = 1e-13;
    int memory = 10;
    std::uint64_t seed = 0;
};

/// Pearson r between D and the distances of `coords`, with its gradient.
double correlation_gradient(const Eigen::MatrixXd& D, const Eigen::MatrixXd& coords,
                            Eigen::MatrixXd& grad);

/// Multi-start maximization of r. Pearson r ignores the scale of d, so the
/// final coordinates are rescaled by the least-squares factor <D,d>/<d,d>
/// to make d directly comparable with D.
Embedding correlation_embed(const Eigen::MatrixXd& D, int n, const CorrelationOptions& opts = {});

}  // namespace shapesim::analysis
