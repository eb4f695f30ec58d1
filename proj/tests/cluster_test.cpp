#include <gtest/gtest.h>

#include <limits>
#include <random>

#include "shapesim/analysis/cluster.hpp"
#include "shapesim/error.hpp"
#include "support/test_shapes.hpp"

namespace shapesim::analysis {
namespace {

Eigen::MatrixXd random_dissimilarity(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) D(i, j) = D(j, i) = u(rng);
    }
    return D;
}

// Independent optimum: recursive enumeration, objective summed pairwise.
void enumerate(const Eigen::MatrixXd& D, int k, std::vector<int>& labels, int pos, double& best) {
    const int n = static_cast<int>(D.rows());
    if (pos == n) {
        double v = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (labels[i] == labels[j]) v += D(i, j);
            }
        }
        best = std::min(best, v);
        return;
    }
    for (int c = 0; c < k; ++c) {
        labels[pos] = c;
        enumerate(D, k, labels, pos + 1, best);
    }
}

double oracle_optimum(const Eigen::MatrixXd& D, int k) {
    std::vector<int> labels(D.rows(), 0);
    double best = std::numeric_limits<double>::infinity();
    enumerate(D, k, labels, 0, best);
    return best;
}

TEST(BlockObjective, CountsOrderedIntraClusterPairs) {
    Eigen::MatrixXd D(3, 3);
    D << 0, 1, 4, 1, 0, 2, 4, 2, 0;
    EXPECT_EQ(2.0, block_objective(D, membership_from_labels({0, 0, 1}, 2)));
    EXPECT_EQ(14.0, block_objective(D, membership_from_labels({0, 0, 0}, 1)));
    EXPECT_EQ(0.0, block_objective(D, membership_from_labels({0, 1, 2}, 3)));
}

TEST(BlockObjective, RejectsInvalidMembership) {
    const Eigen::MatrixXd D = Eigen::MatrixXd::Zero(3, 3);
    Eigen::MatrixXi X = membership_from_labels({0, 1, 1}, 2);
    X(0, 1) = 1;
    EXPECT_THROW(block_objective(D, X), InvalidAssignmentError);
    X = membership_from_labels({0, 1, 1}, 2);
    X(1, 2) = 0;
    EXPECT_THROW(block_objective(D, X), InvalidAssignmentError);
    EXPECT_THROW(block_objective(D, membership_from_labels({0, 1}, 2)), DimensionError);
    EXPECT_THROW(membership_from_labels({0, 2}, 2), InvalidAssignmentError);
}

TEST(BruteForce, MatchesIndependentEnumeration) {
    std::mt19937_64 rng(20);
    for (int t = 0; t < 5; ++t) {
        const auto D = random_dissimilarity(7, rng);
        EXPECT_NEAR(oracle_optimum(D, 3), brute_force_block_cluster(D, 3).objective, 1e-12);
    }
}

TEST(BruteForce, SeparatedGroups) {
    Eigen::MatrixXd pts(6, 1);
    pts << 0.0, 0.1, 0.2, 10.0, 10.1, 10.3;
    const auto r = brute_force_block_cluster(testing::euclidean_distances(pts), 2);
    const auto l = r.cluster_of();
    EXPECT_EQ(l[0], l[1]);
    EXPECT_EQ(l[0], l[2]);
    EXPECT_EQ(l[3], l[4]);
    EXPECT_EQ(l[3], l[5]);
    EXPECT_NE(l[0], l[3]);
    EXPECT_EQ(2, r.effective_clusters());
}

TEST(BruteForce, SizeLimit) {
    EXPECT_THROW(brute_force_block_cluster(Eigen::MatrixXd::Zero(15, 15), 3), SizeError);
    EXPECT_THROW(brute_force_block_cluster(Eigen::MatrixXd::Zero(4, 4), 5), DimensionError);
}

TEST(GeneticAlgorithm, ReachesGlobalOptimumOnSmallInstances) {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 25; ++t) {
        const auto D = random_dissimilarity(8, rng);
        GaOptions opts;
        opts.seed = static_cast<std::uint64_t>(t);
        const auto ga = block_cluster(D, 3, opts);
        EXPECT_NEAR(oracle_optimum(D, 3), ga.objective, 1e-9) << "instance " << t;
    }
}

TEST(GeneticAlgorithm, DeterministicForSeed) {
    std::mt19937_64 rng(22);
    const auto D = random_dissimilarity(10, rng);
    GaOptions opts;
    opts.seed = 5;
    opts.generations = 50;
    const auto a = block_cluster(D, 3, opts);
    const auto b = block_cluster(D, 3, opts);
    EXPECT_EQ(a.membership, b.membership);
    EXPECT_EQ(a.objective, b.objective);
}

TEST(GeneticAlgorithm, OptionValidation) {
    const Eigen::MatrixXd D = Eigen::MatrixXd::Zero(4, 4);
    GaOptions opts;
    opts.population = 1;
    EXPECT_THROW(block_cluster(D, 2, opts), Error);
    opts = {};
    opts.mutation_rate = 1.5;
    EXPECT_THROW(block_cluster(D, 2, opts), Error);
    EXPECT_THROW(block_cluster(D, 0), DimensionError);
}

TEST(Centroids, MinimumSumOfSquares) {
    Eigen::MatrixXd pts(4, 1);
    pts << 0.0, 1.0, 3.0, 50.0;
    const auto D = testing::euclidean_distances(pts);
    // Sums of squares within {0, 1, 2}: 10, 5, 13.
    const auto c = cluster_centroids(D, membership_from_labels({0, 0, 0, 1}, 3));
    ASSERT_EQ(3u, c.size());
    EXPECT_EQ(1, c[0]);
    EXPECT_EQ(3, c[1]);
    EXPECT_FALSE(c[2].has_value());
}

TEST(Centroids, TieGoesToLowestIndex) {
    Eigen::MatrixXd pts(3, 1);
    pts << 0.0, 1.0, 7.0;
    const auto c = cluster_centroids(testing::euclidean_distances(pts),
                                     membership_from_labels({1, 0, 1}, 2));
    EXPECT_EQ(1, c[0]);
    EXPECT_EQ(0, c[1]);
}

TEST(KMeans, SeparatedBlobs) {
    std::mt19937_64 rng(30);
    Eigen::MatrixXd pts = testing::random_points(30, 2, rng) * 0.5;
    pts.bottomRows(15).rowwise() += Eigen::RowVector2d(20.0, 20.0);
    const auto r = kmeans(pts, 2, 7);
    const auto l = r.assignment.cluster_of();
    for (int i = 1; i < 15; ++i) EXPECT_EQ(l[0], l[i]);
    for (int i = 16; i < 30; ++i) EXPECT_EQ(l[15], l[i]);
    EXPECT_NE(l[0], l[15]);
    for (int c = 0; c < 2; ++c) {
        ASSERT_TRUE(r.assignment.centroid_index[c].has_value());
        EXPECT_EQ(c, l[*r.assignment.centroid_index[c]]);
    }
}

TEST(KMeans, WcssNeverIncreases) {
    std::mt19937_64 rng(31);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto r = kmeans(testing::random_points(60, 3, rng), 5, seed);
        ASSERT_FALSE(r.wcss_history.empty());
        for (std::size_t i = 1; i < r.wcss_history.size(); ++i) {
            EXPECT_LE(r.wcss_history[i], r.wcss_history[i - 1] * (1 + 1e-12));
        }
        EXPECT_EQ(r.wcss, r.wcss_history.back());
        EXPECT_EQ(5, r.assignment.effective_clusters());
    }
}

TEST(KMeans, OnePointPerClusterHasZeroWcss) {
    std::mt19937_64 rng(32);
    const auto r = kmeans(testing::random_points(4, 2, rng), 4, 1);
    EXPECT_EQ(0.0, r.wcss);
    EXPECT_EQ(4, r.assignment.effective_clusters());
}

TEST(KMeans, DuplicatePointsStillFillEveryCluster) {
    Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(5, 2);
    pts(4, 0) = 1.0;
    const auto r = kmeans(pts, 3, 0);
    EXPECT_EQ(3, r.assignment.effective_clusters());
}

TEST(KMeans, Validation) {
    EXPECT_THROW(kmeans(Eigen::MatrixXd::Zero(3, 2), 4, 0), DimensionError);
    EXPECT_THROW(kmeans(Eigen::MatrixXd::Zero(3, 2), 0, 0), DimensionError);
}

TEST(BlockObjective, PairedExample) {
    Eigen::MatrixXd D(3, 3);
    D << 0, 2, 9, 2, 0, 9, 9, 9, 0;
    EXPECT_EQ(4.0, block_objective(D, membership_from_labels({0, 0, 1}, 2)));
    EXPECT_EQ(D.sum(), block_objective(D, membership_from_labels({0, 0, 0}, 1)));
}

TEST(BlockCluster, OneClusterAndSingletons) {
    std::mt19937_64 rng(23);
    const auto D = random_dissimilarity(6, rng);
    const auto one = block_cluster(D, 1);
    EXPECT_EQ(1, one.effective_clusters());
    EXPECT_NEAR(D.sum(), one.objective, 1e-12);
    EXPECT_EQ(0.0, block_cluster(D, 6).objective);
    EXPECT_EQ(0.0, brute_force_block_cluster(D, 6).objective);
}

TEST(BlockCluster, ObjectiveBounds) {
    std::mt19937_64 rng(24);
    for (int t = 0; t < 5; ++t) {
        const auto D = random_dissimilarity(9, rng);
        GaOptions opts;
        opts.generations = 100;
        const auto a = block_cluster(D, 3, opts);
        EXPECT_GE(a.objective, 0.0);
        EXPECT_LE(a.objective, D.sum());
        EXPECT_EQ(a.objective, block_objective(D, a.membership));
    }
}

TEST(Centroids, CollinearZeroOneTen) {
    Eigen::MatrixXd pts(3, 1);
    pts << 0.0, 1.0, 10.0;
    const auto c = cluster_centroids(testing::euclidean_distances(pts),
                                     membership_from_labels({0, 0, 0}, 1));
    EXPECT_EQ(1, c[0]);
}

TEST(KMeans, IdenticalPoints) {
    const auto r = kmeans(Eigen::MatrixXd::Ones(5, 2), 2, 3);
    EXPECT_EQ(0.0, r.wcss);
    EXPECT_EQ(2, r.assignment.effective_clusters());
}

}  // namespace
}  // namespace shapesim::analysis
