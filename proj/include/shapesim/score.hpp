#pragma once

// Normalized symmetric-difference dissimilarity between two shapes, minimized
// over the similarity transform of the second ("mobile") shape.

#include <cstdint>
#include <vector>

#include "shapesim/geometry.hpp"
#include "shapesim/matrix.hpp"
#include "shapesim/minimize.hpp"

namespace shapesim::score {

struct ScoreOptions {
    int n_starts = 8;
    int max_iters = 200;
    double grad_step = 1e-6;
    double tol = 1e-8;
    int memory = 5;
    // Rotates the whole grid of starting angles by a seeded phase in
    // [0, 2*pi / n_starts). Seed 0 starts at angle 0.
    std::uint64_t seed = 0;

    MinimizeOptions minimizer() const { return {max_iters, grad_step, tol, memory}; }
    void validate() const;
};

struct ScoreResult {
    double score = 100.0;  // percent
    geometry::SimilarityTransform best_transform;
    std::vector<double> per_start_scores;  // successful starts only
    int failed_starts = 0;
    long evaluations = 0;
};

/// 100 * (dA + dB) / (area(fixed) + area(T(mobile))), in percent.
double objective(const geometry::Shape& fixed, const geometry::Shape& mobile,
                 const geometry::SimilarityTransform& t);

/// Initial angles used by dissimilarity(): n_starts values uniformly spaced
/// over [0, 2*pi), shifted by the seeded phase.
std::vector<double> start_angles(const ScoreOptions& opts);

/// Multi-start minimization of objective() over the mobile transform. Each
/// start aligns area centroids and matches areas, then rotates the mobile
/// shape to one of start_angles().
ScoreResult dissimilarity(const geometry::Shape& fixed, const geometry::Shape& mobile,
                          const ScoreOptions& opts = {});

/// Scores every unordered pair in both directions and stores the mean.
/// Pairs are spread over `workers` threads; the result does not depend on
/// the worker count.
DissimilarityMatrix dissimilarity_matrix(const std::vector<geometry::Shape>& shapes,
                                         const ScoreOptions& opts = {}, int workers = 1);

}  // namespace shapesim::score
