#include "shapesim/minimize.hpp"

#include <cmath>
#include <algorithm>
#include <deque>
#include <limits>
#include <vector>

namespace shapesim::score {

namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 50;

struct Problem {
    std::function<double(const Eigen::VectorXd&)> value;
    std::function<void(const Eigen::VectorXd&, double, Eigen::VectorXd&)> gradient;
    Projection project;
};

struct CurvaturePair {
    Eigen::VectorXd s, y;
    double rho;
};

Eigen::VectorXd two_loop(const Eigen::VectorXd& g, const std::deque<CurvaturePair>& mem) {
    Eigen::VectorXd q = g;
    std::vector<double> alpha(mem.size());
    for (std::size_t i = mem.size(); i-- > 0;) {
        alpha[i] = mem[i].rho * mem[i].s.dot(q);
        q -= alpha[i] * mem[i].y;
    }
    const CurvaturePair& last = mem.back();
    q *= last.s.dot(last.y) / last.y.squaredNorm();
    for (std::size_t i = 0; i < mem.size(); ++i) {
        const double beta = mem[i].rho * mem[i].y.dot(q);
        q += (alpha[i] - beta) * mem[i].s;
    }
    return -q;
}

MinimizeResult run(const Problem& p, Eigen::VectorXd x, const MinimizeOptions& opts,
                   long& evaluations) {
    if (p.project) p.project(x);
    double f = p.value(x);
    if (!std::isfinite(f)) {
        throw MinimizationError("objective is not finite at the starting point", x, f);
    }
    Eigen::VectorXd g(x.size());
    p.gradient(x, f, g);

    MinimizeResult out;
    std::deque<CurvaturePair> memory;
    out.reason = StopReason::max_iters;

    int it = 0;
    for (; it < opts.max_iters; ++it) {
        if (!g.allFinite()) throw MinimizationError("gradient is not finite", x, f);
        if (g.norm() <= opts.tol * std::max(1.0, std::abs(f))) {
            out.reason = StopReason::gradient;
            break;
        }

        Eigen::VectorXd d;
        double step = 1.0;
        if (memory.empty()) {
            d = -g;
            step = 1.0 / g.norm();
        } else {
            d = two_loop(g, memory);
            if (!(g.dot(d) < 0.0)) {
                memory.clear();
                d = -g;
                step = 1.0 / g.norm();
            }
        }

        Eigen::VectorXd x_new;
        double f_new = f;
        bool accepted = false;
        for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
            const double slope = g.dot(d);
            double a = step;
            for (int bt = 0; bt < kMaxBacktracks; ++bt, a *= 0.5) {
                x_new = x + a * d;
                f_new = p.value(x_new);
                if (!std::isfinite(f_new)) {
                    throw MinimizationError("objective became non-finite during line search", x,
                                            f);
                }
                if (f_new <= f + kArmijo * a * slope) {
                    accepted = true;
                    break;
                }
            }
            if (!accepted && !memory.empty()) {
                // Stale curvature: retry once along steepest descent.
                memory.clear();
                d = -g;
                step = 1.0 / g.norm();
            } else {
                break;
            }
        }
        if (!accepted) {
            out.reason = StopReason::line_search;
            break;
        }

        if (p.project) p.project(x_new);
        Eigen::VectorXd g_new(x.size());
        p.gradient(x_new, f_new, g_new);

        Eigen::VectorXd s = x_new - x;
        Eigen::VectorXd y = g_new - g;
        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            memory.push_back({std::move(s), std::move(y), 1.0 / sy});
            if (static_cast<int>(memory.size()) > opts.memory) memory.pop_front();
        }

        const double decrease = f - f_new;
        const double scale = std::max({std::abs(f), std::abs(f_new),
                                       std::numeric_limits<double>::min()});
        x = std::move(x_new);
        f = f_new;
        g = std::move(g_new);
        if (decrease <= opts.tol * scale) {
            ++it;
            out.reason = StopReason::decrease;
            break;
        }
    }

    out.x = std::move(x);
    out.f = f;
    out.iterations = it;
    out.evaluations = evaluations;
    return out;
}

}  // namespace

Eigen::VectorXd central_difference_gradient(const Objective& f, const Eigen::VectorXd& x,
                                            double grad_step, long* evaluations) {
    Eigen::VectorXd g(x.size());
    Eigen::VectorXd probe = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double h = grad_step * std::max(1.0, std::abs(x[i]));
        probe[i] = x[i] + h;
        const double up = f(probe);
        probe[i] = x[i] - h;
        const double down = f(probe);
        probe[i] = x[i];
        g[i] = (up - down) / (2.0 * h);
    }
    if (evaluations) *evaluations += 2 * x.size();
    return g;
}

MinimizeResult minimize(const Objective& f, Eigen::VectorXd x0, const MinimizeOptions& opts) {
    long evaluations = 0;
    Problem p;
    p.value = [&](const Eigen::VectorXd& x) {
        ++evaluations;
        return f(x);
    };
    p.gradient = [&](const Eigen::VectorXd& x, double, Eigen::VectorXd& g) {
        g = central_difference_gradient(f, x, opts.grad_step, &evaluations);
    };
    return run(p, std::move(x0), opts, evaluations);
}

MinimizeResult minimize_with_gradient(const ObjectiveWithGradient& fg, Eigen::VectorXd x0,
                                      const MinimizeOptions& opts, const Projection& project) {
    long evaluations = 0;
    Eigen::VectorXd cached_x;
    Eigen::VectorXd cached_g;
    Problem p;
    p.value = [&](const Eigen::VectorXd& x) {
        ++evaluations;
        cached_x = x;
        return fg(x, cached_g);
    };
    p.gradient = [&](const Eigen::VectorXd& x, double, Eigen::VectorXd& g) {
        if (cached_x.size() == x.size() && cached_x == x) {
            g = cached_g;
            return;
        }
        ++evaluations;
        fg(x, g);
    };
    p.project = project;
    return run(p, std::move(x0), opts, evaluations);
}

}  // namespace shapesim::score
