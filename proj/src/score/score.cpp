#include "shapesim/score.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <numbers>
#include <random>
#include <set>
#include <thread>

#include "shapesim/error.hpp"

namespace shapesim::score {

using geometry::Point;
using geometry::Shape;
using geometry::SimilarityTransform;

void ScoreOptions::validate() const {
    if (n_starts < 1) throw Error("n_starts must be at least 1");
    if (max_iters < 1) throw Error("max_iters must be at least 1");
    if (!(grad_step > 0.0) || !(tol > 0.0)) throw Error("tolerances must be positive");
    if (memory < 1) throw Error("memory must be at least 1");
}

double objective(const Shape& fixed, const Shape& mobile, const SimilarityTransform& t) {
    const auto r = geometry::overlap(fixed, geometry::apply_transform(mobile, t));
    const double score = 100.0 * (r.delta_a + r.delta_b) / (r.area_a + r.area_b);
    return std::clamp(score, 0.0, 100.0);
}

std::vector<double> start_angles(const ScoreOptions& opts) {
    const double spacing = 2.0 * std::numbers::pi / opts.n_starts;
    double phase = 0.0;
    if (opts.seed != 0) {
        std::mt19937_64 rng(opts.seed);
        phase = std::uniform_real_distribution<double>(0.0, spacing)(rng);
    }
    std::vector<double> angles(opts.n_starts);
    for (int k = 0; k < opts.n_starts; ++k) angles[k] = phase + spacing * k;
    return angles;
}

namespace {

// Minimizer coordinates: (log scale, angle, u, v). The mobile shape is
// pre-centred on its centroid so rotation and scaling act about it, and the
// translation is measured in units of the fixed shape's characteristic
// length so all four coordinates are of order one.
struct Parameterization {
    Point fixed_centroid;
    Point mobile_centroid;
    double length;

    SimilarityTransform centred(const Eigen::VectorXd& x) const {
        return {x[0], x[1], fixed_centroid.x + length * x[2], fixed_centroid.y + length * x[3]};
    }

    // The same transform expressed for the original (uncentred) mobile shape.
    SimilarityTransform original(const Eigen::VectorXd& x) const {
        SimilarityTransform t = centred(x);
        const Point shifted = SimilarityTransform{x[0], x[1], 0.0, 0.0}.apply(mobile_centroid);
        t.tx -= shifted.x;
        t.ty -= shifted.y;
        return t;
    }
};

}  // namespace

ScoreResult dissimilarity(const Shape& fixed, const Shape& mobile, const ScoreOptions& opts) {
    opts.validate();

    const double fixed_area = geometry::shape_area(fixed);
    const double mobile_area = geometry::shape_area(mobile);
    const Parameterization param{geometry::shape_centroid(fixed), geometry::shape_centroid(mobile),
                                 std::sqrt(fixed_area)};
    const Shape centred_mobile = geometry::apply_transform(
        mobile, {0.0, 0.0, -param.mobile_centroid.x, -param.mobile_centroid.y});

    const Objective f = [&](const Eigen::VectorXd& x) {
        return objective(fixed, centred_mobile, param.centred(x));
    };

    ScoreResult result;
    const double log_scale0 = 0.5 * std::log(fixed_area / mobile_area);
    bool have_best = false;
    std::string last_failure;
    for (double angle : start_angles(opts)) {
        Eigen::Vector4d x0(log_scale0, angle, 0.0, 0.0);
        try {
            const MinimizeResult m = minimize(f, x0, opts.minimizer());
            result.evaluations += m.evaluations;
            result.per_start_scores.push_back(m.f);
            if (!have_best || m.f < result.score) {
                result.score = m.f;
                result.best_transform = param.original(m.x);
                have_best = true;
            }
        } catch (const MinimizationError& e) {
            ++result.failed_starts;
            last_failure = e.what();
        } catch (const GeometryRobustnessError& e) {
            ++result.failed_starts;
            last_failure = e.what();
        }
    }
    if (!have_best) {
        throw Error("all " + std::to_string(opts.n_starts) + " starts failed for '" +
                    fixed.name() + "' vs '" + mobile.name() + "': " + last_failure);
    }
    return result;
}

DissimilarityMatrix dissimilarity_matrix(const std::vector<Shape>& shapes,
                                         const ScoreOptions& opts, int workers) {
    const auto n = static_cast<Eigen::Index>(shapes.size());
    if (n < 2) throw Error("a dissimilarity matrix needs at least 2 shapes");
    std::set<std::string> names;
    for (const Shape& s : shapes) {
        if (!names.insert(s.name()).second) {
            throw DuplicateNameError("duplicate shape name '" + s.name() + "'");
        }
    }
    opts.validate();

    struct Pair {
        Eigen::Index i, j;
        double forward = 0.0, backward = 0.0;
        std::exception_ptr error;
    };
    std::vector<Pair> pairs;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) pairs.push_back({i, j, 0.0, 0.0, nullptr});
    }

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k = next++; k < pairs.size(); k = next++) {
            Pair& p = pairs[k];
            try {
                p.forward = dissimilarity(shapes[p.i], shapes[p.j], opts).score;
                p.backward = dissimilarity(shapes[p.j], shapes[p.i], opts).score;
            } catch (...) {
                p.error = std::current_exception();
            }
        }
    };
    const int count = std::clamp(workers, 1, static_cast<int>(pairs.size()));
    if (count == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < count; ++w) pool.emplace_back(work);
    }

    DissimilarityMatrix out;
    out.entries = Eigen::MatrixXd::Zero(n, n);
    for (const Shape& s : shapes) out.labels.push_back(s.name());
    for (const Pair& p : pairs) {
        if (p.error) {
            try {
                std::rethrow_exception(p.error);
            } catch (const std::exception& e) {
                throw Error("scoring pair ('" + shapes[p.i].name() + "', '" +
                            shapes[p.j].name() + "') failed: " + e.what());
            }
        }
        const double mean = 0.5 * (p.forward + p.backward);
        out.entries(p.i, p.j) = mean;
        out.entries(p.j, p.i) = mean;
        out.asymmetry = std::max(out.asymmetry, std::abs(p.forward - p.backward));
    }
    return out;
}

}  // namespace shapesim::score
