#include <limits>
#include <random>
#include <string>

#include "shapesim/analysis/cluster.hpp"
#include "shapesim/analysis/metrics.hpp"
#include "shapesim/error.hpp"

namespace shapesim::analysis {

namespace {

Eigen::MatrixXd plus_plus_init(const Eigen::MatrixXd& points, int k, std::mt19937_64& rng) {
    const auto n = points.rows();
    Eigen::MatrixXd means(k, points.cols());
    means.row(0) = points.row(std::uniform_int_distribution<Eigen::Index>(0, n - 1)(rng));
    Eigen::VectorXd nearest(n);
    for (Eigen::Index i = 0; i < n; ++i) nearest[i] = (points.row(i) - means.row(0)).squaredNorm();

    for (int c = 1; c < k; ++c) {
        const double total = nearest.sum();
        Eigen::Index chosen = 0;
        if (total > 0.0) {
            double target = std::uniform_real_distribution<double>(0.0, total)(rng);
            chosen = n - 1;
            for (Eigen::Index i = 0; i < n; ++i) {
                target -= nearest[i];
                if (target < 0.0 && nearest[i] > 0.0) {
                    chosen = i;
                    break;
                }
            }
        } else {
            chosen = std::uniform_int_distribution<Eigen::Index>(0, n - 1)(rng);
        }
        means.row(c) = points.row(chosen);
        for (Eigen::Index i = 0; i < n; ++i) {
            nearest[i] = std::min(nearest[i], (points.row(i) - means.row(c)).squaredNorm());
        }
    }
    return means;
}

double within_ss(const Eigen::MatrixXd& points, const Eigen::MatrixXd& means,
                 const std::vector<int>& labels) {
    double ss = 0.0;
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        ss += (points.row(i) - means.row(labels[i])).squaredNorm();
    }
    return ss;
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed, int max_iters) {
    const auto n = points.rows();
    if (n < 1) throw DimensionError("k-means needs at least one point");
    if (k < 1 || k > n) {
        throw DimensionError("cluster count must be in [1, " + std::to_string(n) + "]");
    }

    std::mt19937_64 rng(seed);
    KMeansResult out;
    out.means = plus_plus_init(points, k, rng);

    std::vector<int> labels(n, -1);
    std::vector<int> previous;
    for (int it = 0; it < max_iters; ++it) {
        for (Eigen::Index i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                const double d2 = (points.row(i) - out.means.row(c)).squaredNorm();
                if (d2 < best) {
                    best = d2;
                    labels[i] = c;
                }
            }
        }

        // Reseed empty clusters with the point farthest from its own mean,
        // never emptying the donor cluster.
        std::vector<Eigen::Index> sizes(k, 0);
        for (int l : labels) ++sizes[l];
        for (int c = 0; c < k; ++c) {
            if (sizes[c] > 0) continue;
            Eigen::Index far = -1;
            double far_d2 = -1.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                if (sizes[labels[i]] < 2) continue;
                const double d2 = (points.row(i) - out.means.row(labels[i])).squaredNorm();
                if (d2 > far_d2) {
                    far_d2 = d2;
                    far = i;
                }
            }
            --sizes[labels[far]];
            labels[far] = c;
            sizes[c] = 1;
            out.means.row(c) = points.row(far);
        }

        if (labels == previous) break;
        previous = labels;
        out.iterations = it + 1;

        out.means.setZero();
        for (Eigen::Index i = 0; i < n; ++i) out.means.row(labels[i]) += points.row(i);
        for (int c = 0; c < k; ++c) out.means.row(c) /= static_cast<double>(sizes[c]);
        out.wcss_history.push_back(within_ss(points, out.means, labels));
    }

    out.wcss = out.wcss_history.empty() ? 0.0 : out.wcss_history.back();
    out.assignment.membership = membership_from_labels(labels, k);
    out.assignment.objective =
        n > 1 ? block_objective(distances_from_coords(points), out.assignment.membership) : 0.0;
    out.assignment.centroid_index.resize(k);
    for (int c = 0; c < k; ++c) {
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < n; ++i) {
            if (labels[i] != c) continue;
            const double d2 = (points.row(i) - out.means.row(c)).squaredNorm();
            if (d2 < best) {
                best = d2;
                out.assignment.centroid_index[c] = i;
            }
        }
    }
    return out;
}

}  // namespace shapesim::analysis
