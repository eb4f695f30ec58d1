#include "shapesim/analysis/cluster.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "shapesim/analysis/metrics.hpp"
#include "shapesim/error.hpp"

namespace shapesim::analysis {

namespace {

void require_cluster_count(const Eigen::MatrixXd& D, int k) {
    require_dissimilarity(D);
    if (k < 1 || k > D.rows()) {
        throw DimensionError("cluster count must be in [1, " + std::to_string(D.rows()) + "]");
    }
}

// Sum of intra-cluster entries over ordered pairs, straight from labels.
double label_objective(const Eigen::MatrixXd& D, const std::vector<int>& labels) {
    double total = 0.0;
    const auto n = static_cast<Eigen::Index>(labels.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            if (labels[i] == labels[j]) total += D(i, j);
        }
    }
    return 2.0 * total;
}

ClusterAssignment finish(const Eigen::MatrixXd& D, const std::vector<int>& labels, int k) {
    ClusterAssignment out;
    out.membership = membership_from_labels(labels, k);
    out.objective = block_objective(D, out.membership);
    out.centroid_index = cluster_centroids(D, out.membership);
    return out;
}

struct Individual {
    std::vector<int> labels;
    double fitness;
};

Individual run_ga(const Eigen::MatrixXd& D, int k, const GaOptions& opts, std::mt19937_64& rng) {
    const int n = static_cast<int>(D.rows());
    std::uniform_int_distribution<int> pick_label(0, k - 1);
    std::uniform_int_distribution<int> pick_object(0, n - 1);
    std::uniform_int_distribution<int> pick_member(0, opts.population - 1);
    std::uniform_int_distribution<int> pick_cut(1, std::max(1, n - 1));
    std::uniform_real_distribution<double> coin(0.0, 1.0);

    std::vector<Individual> pop(opts.population);
    for (auto& ind : pop) {
        ind.labels.resize(n);
        for (int& l : ind.labels) l = pick_label(rng);
        ind.fitness = label_objective(D, ind.labels);
    }
    auto by_fitness = [](const Individual& a, const Individual& b) {
        return a.fitness < b.fitness;
    };
    Individual best = *std::min_element(pop.begin(), pop.end(), by_fitness);

    auto tournament = [&]() -> const Individual& {
        const Individual& a = pop[pick_member(rng)];
        const Individual& b = pop[pick_member(rng)];
        return b.fitness < a.fitness ? b : a;
    };

    std::vector<Individual> next(opts.population);
    for (int gen = 0; gen < opts.generations; ++gen) {
        next[0] = *std::min_element(pop.begin(), pop.end(), by_fitness);
        for (int c = 1; c < opts.population; ++c) {
            const Individual& mother = tournament();
            const Individual& father = tournament();
            Individual& child = next[c];
            child.labels = mother.labels;
            if (n > 1) {
                const int cut = pick_cut(rng);
                std::copy(father.labels.begin() + cut, father.labels.end(),
                          child.labels.begin() + cut);
            }
            if (k > 1 && coin(rng) < opts.mutation_rate) {
                int& l = child.labels[pick_object(rng)];
                const int shift = 1 + std::uniform_int_distribution<int>(0, k - 2)(rng);
                l = (l + shift) % k;
            }
            child.fitness = label_objective(D, child.labels);
        }
        std::swap(pop, next);
        const Individual& gen_best = *std::min_element(pop.begin(), pop.end(), by_fitness);
        if (gen_best.fitness < best.fitness) best = gen_best;
    }
    return best;
}

}  // namespace

std::vector<int> ClusterAssignment::cluster_of() const {
    std::vector<int> labels(membership.cols(), -1);
    for (Eigen::Index n = 0; n < membership.cols(); ++n) {
        for (Eigen::Index k = 0; k < membership.rows(); ++k) {
            if (membership(k, n) == 1) labels[n] = static_cast<int>(k);
        }
    }
    return labels;
}

int ClusterAssignment::effective_clusters() const {
    int count = 0;
    for (Eigen::Index k = 0; k < membership.rows(); ++k) count += membership.row(k).sum() > 0;
    return count;
}

Eigen::MatrixXi membership_from_labels(const std::vector<int>& labels, int k) {
    Eigen::MatrixXi x = Eigen::MatrixXi::Zero(k, static_cast<Eigen::Index>(labels.size()));
    for (std::size_t n = 0; n < labels.size(); ++n) {
        if (labels[n] < 0 || labels[n] >= k) {
            throw InvalidAssignmentError("cluster label out of range for object " +
                                         std::to_string(n));
        }
        x(labels[n], static_cast<Eigen::Index>(n)) = 1;
    }
    return x;
}

double block_objective(const Eigen::MatrixXd& D, const Eigen::MatrixXi& X) {
    if (X.cols() != D.rows() || D.rows() != D.cols()) {
        throw DimensionError("membership has " + std::to_string(X.cols()) +
                             " columns for a matrix of size " + std::to_string(D.rows()));
    }
    for (Eigen::Index n = 0; n < X.cols(); ++n) {
        if ((X.col(n).array() < 0).any() || (X.col(n).array() > 1).any() || X.col(n).sum() != 1) {
            throw InvalidAssignmentError("object " + std::to_string(n) +
                                         " must belong to exactly one cluster");
        }
    }
    const Eigen::MatrixXi q = X.transpose() * X;
    double total = 0.0;
    for (Eigen::Index m = 0; m < D.rows(); ++m) {
        for (Eigen::Index n = 0; n < D.cols(); ++n) total += q(m, n) * D(m, n);
    }
    return total;
}

ClusterAssignment block_cluster(const Eigen::MatrixXd& D, int k, const GaOptions& opts) {
    require_cluster_count(D, k);
    if (opts.population < 2 || opts.generations < 0 || opts.restarts < 1 ||
        opts.mutation_rate < 0.0 || opts.mutation_rate > 1.0) {
        throw Error("invalid genetic algorithm options");
    }
    Individual best{{}, 0.0};
    for (int r = 0; r < opts.restarts; ++r) {
        std::seed_seq seq{opts.seed, static_cast<std::uint64_t>(r)};
        std::mt19937_64 rng(seq);
        Individual found = run_ga(D, k, opts, rng);
        if (r == 0 || found.fitness < best.fitness) best = std::move(found);
    }
    return finish(D, best.labels, k);
}

ClusterAssignment brute_force_block_cluster(const Eigen::MatrixXd& D, int k) {
    require_cluster_count(D, k);
    const auto n = static_cast<int>(D.rows());
    double combos = 1.0;
    for (int i = 0; i < n; ++i) combos *= k;
    if (combos > 1e7) {
        throw SizeError("brute force needs K^N <= 1e7, got " + std::to_string(k) + "^" +
                        std::to_string(n));
    }

    std::vector<int> labels(n, 0);
    std::vector<int> best = labels;
    double best_value = label_objective(D, labels);
    while (true) {
        int pos = n - 1;
        while (pos >= 0 && labels[pos] == k - 1) labels[pos--] = 0;
        if (pos < 0) break;
        ++labels[pos];
        const double v = label_objective(D, labels);
        if (v < best_value) {
            best_value = v;
            best = labels;
        }
    }
    return finish(D, best, k);
}

std::vector<std::optional<Eigen::Index>> cluster_centroids(const Eigen::MatrixXd& D,
                                                           const Eigen::MatrixXi& X) {
    block_objective(D, X);  // validates X
    std::vector<std::optional<Eigen::Index>> out(X.rows());
    for (Eigen::Index k = 0; k < X.rows(); ++k) {
        double best = 0.0;
        for (Eigen::Index i = 0; i < X.cols(); ++i) {
            if (X(k, i) != 1) continue;
            double sum = 0.0;
            for (Eigen::Index j = 0; j < X.cols(); ++j) {
                if (X(k, j) == 1) sum += D(i, j) * D(i, j);
            }
            if (!out[k] || sum < best) {
                out[k] = i;
                best = sum;
            }
        }
    }
    return out;
}

}  // namespace shapesim::analysis
