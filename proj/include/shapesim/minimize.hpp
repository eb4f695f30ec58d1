#pragma once

// Limited-memory quasi-Newton (L-BFGS two-loop recursion) with backtracking
// Armijo line search. Used both for shape fitting, where the gradient comes
// from central differences, and for embeddings with analytic gradients.

#include <functional>
#include <stdexcept>

#include <Eigen/Dense>

#include "shapesim/error.hpp"

namespace shapesim::score {

struct MinimizeOptions {
    int max_iters = 200;
    double grad_step = 1e-6;  // relative central-difference step
    double tol = 1e-8;        // relative decrease / gradient norm
    int memory = 5;
};

enum class StopReason { gradient, decrease, max_iters, line_search };

struct MinimizeResult {
    Eigen::VectorXd x;
    double f = 0.0;
    int iterations = 0;
    long evaluations = 0;
    StopReason reason = StopReason::gradient;
};

/// Raised when the objective returns a non-finite value. Carries the best
/// point evaluated so far.
class MinimizationError : public Error {
public:
    MinimizationError(const std::string& what, Eigen::VectorXd best_x, double best_f)
        : Error(what), best_x_(std::move(best_x)), best_f_(best_f) {}

    const Eigen::VectorXd& best_x() const noexcept { return best_x_; }
    double best_f() const noexcept { return best_f_; }

private:
    Eigen::VectorXd best_x_;
    double best_f_;
};

using Objective = std::function<double(const Eigen::VectorXd&)>;

/// Returns f(x) and writes the gradient into `grad`.
using ObjectiveWithGradient = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd& grad)>;

/// Maps an accepted iterate onto an equivalent one (e.g. re-centering).
/// Must leave the objective value unchanged.
using Projection = std::function<void(Eigen::VectorXd&)>;

/// Central differences, two evaluations per coordinate. The step for
/// coordinate i is grad_step * max(1, |x_i|).
Eigen::VectorXd central_difference_gradient(const Objective& f, const Eigen::VectorXd& x,
                                            double grad_step, long* evaluations = nullptr);

/// Minimizes f from x0 using central-difference gradients.
MinimizeResult minimize(const Objective& f, Eigen::VectorXd x0, const MinimizeOptions& opts);

/// Minimizes f from x0 using the supplied gradient. `project`, when given,
/// is applied to x0 and to every accepted iterate.
MinimizeResult minimize_with_gradient(const ObjectiveWithGradient& fg, Eigen::VectorXd x0,
                                      const MinimizeOptions& opts,
                                      const Projection& project = {});

}  // namespace shapesim::score
