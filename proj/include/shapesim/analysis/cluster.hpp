#pragma once

// Block-matrix clustering: choose a K x N binary membership X (one 1 per
// column) minimizing the sum of B = (X^T X) .* D, i.e. the total of all
// intra-cluster dissimilarities. Also K-means on embedded coordinates.

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace shapesim::analysis {

struct ClusterAssignment {
    Eigen::MatrixXi membership;  // K x N, entries 0/1, unit column sums
    std::vector<std::optional<Eigen::Index>> centroid_index;  // per cluster
    double objective = 0.0;  // block_objective(D, membership)

    /// Cluster index of every object.
    std::vector<int> cluster_of() const;
    int effective_clusters() const;
};

/// K x N membership matrix from a per-object cluster label in [0, K).
Eigen::MatrixXi membership_from_labels(const std::vector<int>& labels, int k);

/// Sum over m, n of (X^T X)(m, n) * D(m, n).
/// Throws InvalidAssignmentError unless X is binary with unit column sums.
double block_objective(const Eigen::MatrixXd& D, const Eigen::MatrixXi& X);

struct GaOptions {
    int population = 50;
    int generations = 500;
    double mutation_rate = 0.3;  // probability a child gets one object reassigned
    int restarts = 5;
    std::uint64_t seed = 0;
};

/// Genetic algorithm over cluster-label vectors: tournament selection,
/// single-point crossover, single-object reassignment mutation, elitism of
/// one. Returns the best of all restarts (lowest restart index on ties),
/// with mean centroids filled in. Empty clusters are allowed.
ClusterAssignment block_cluster(const Eigen::MatrixXd& D, int k, const GaOptions& opts = {});

/// Global optimum by enumerating all K^N label vectors.
/// Throws SizeError when K^N exceeds 1e7.
ClusterAssignment brute_force_block_cluster(const Eigen::MatrixXd& D, int k);

/// Per cluster, the member minimizing the sum of squared dissimilarities to
/// the other members; lowest index on ties; nullopt for an empty cluster.
std::vector<std::optional<Eigen::Index>> cluster_centroids(const Eigen::MatrixXd& D,
                                                           const Eigen::MatrixXi& X);

struct KMeansResult {
    ClusterAssignment assignment;  // objective measured on the Euclidean distances
    Eigen::MatrixXd means;         // K x dim
    double wcss = 0.0;             // within-cluster sum of squares
    std::vector<double> wcss_history;
    int iterations = 0;
};

/// Lloyd iterations from a k-means++ start; an empty cluster is reseeded
/// with the point farthest from its current mean. Stops when assignments
/// repeat. Centroid index is the member nearest each mean.
KMeansResult kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed,
                    int max_iters = 1000);

}  // namespace shapesim::analysis
