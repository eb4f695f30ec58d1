#include "shapesim/analysis/embed.hpp"

#include <cmath>
#include <random>

#include "shapesim/analysis/metrics.hpp"
#include "shapesim/error.hpp"
#include "shapesim/minimize.hpp"

namespace shapesim::analysis {

namespace {

using ConstCoords = Eigen::Map<const Eigen::MatrixXd>;
using Coords = Eigen::Map<Eigen::MatrixXd>;

void require_dimension(const Eigen::MatrixXd& D, int n) {
    require_dissimilarity(D);
    if (n < 1 || n >= D.rows()) {
        throw DimensionError("embedding dimension must be in [1, " + std::to_string(D.rows() - 1) +
                             "], got " + std::to_string(n));
    }
}

double mean_off_diagonal(const Eigen::MatrixXd& D) {
    const auto n = D.rows();
    return D.sum() / static_cast<double>(n * (n - 1));
}

Eigen::MatrixXd random_coords(Eigen::Index rows, Eigen::Index cols, double half_width,
                              std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-half_width, half_width);
    Eigen::MatrixXd x(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c) {
        for (Eigen::Index r = 0; r < rows; ++r) x(r, c) = u(rng);
    }
    return x;
}

void centre_columns(Eigen::VectorXd& flat, Eigen::Index rows, Eigen::Index cols) {
    Coords x(flat.data(), rows, cols);
    x.rowwise() -= x.colwise().mean();
}

std::mt19937_64 start_rng(std::uint64_t seed, int start) {
    std::seed_seq seq{seed, static_cast<std::uint64_t>(start)};
    return std::mt19937_64(seq);
}

// Deterministic orientation for eigenvector-derived coordinates.
void fix_signs(Eigen::MatrixXd& vectors) {
    for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
        Eigen::Index at = 0;
        vectors.col(c).cwiseAbs().maxCoeff(&at);
        if (vectors(at, c) < 0.0) vectors.col(c) *= -1.0;
    }
}

}  // namespace

std::string to_string(EmbeddingMethod method) {
    switch (method) {
        case EmbeddingMethod::gmds: return "gmds";
        case EmbeddingMethod::torgerson: return "torgerson";
        case EmbeddingMethod::correlation: return "correlation";
    }
    return "unknown";
}

double raw_stress(const Eigen::MatrixXd& D, const Eigen::MatrixXd& coords) {
    double stress = 0.0;
    for (Eigen::Index i = 0; i < coords.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < coords.rows(); ++j) {
            const double r = D(i, j) - (coords.row(j) - coords.row(i)).norm();
            stress += r * r;
        }
    }
    return stress;
}

double raw_stress_gradient(const Eigen::MatrixXd& D, const Eigen::MatrixXd& coords,
                           Eigen::MatrixXd& grad) {
    grad = Eigen::MatrixXd::Zero(coords.rows(), coords.cols());
    double stress = 0.0;
    for (Eigen::Index i = 0; i < coords.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < coords.rows(); ++j) {
            const Eigen::RowVectorXd diff = coords.row(i) - coords.row(j);
            const double d = diff.norm();
            const double r = D(i, j) - d;
            stress += r * r;
            if (d > 0.0) {
                const Eigen::RowVectorXd term = (-2.0 * r / d) * diff;
                grad.row(i) += term;
                grad.row(j) -= term;
            }
        }
    }
    return stress;
}

Embedding gmds_embed(const Eigen::MatrixXd& D, int n, const GmdsOptions& opts) {
    require_dimension(D, n);
    if (D.minCoeff() < 0.0) throw Error("gmds needs nonnegative dissimilarities");
    if (opts.starts < 1 && !opts.warm_start) throw Error("gmds needs at least one start");
    const auto rows = D.rows();
    const double spread = std::max(mean_off_diagonal(D), 1e-12);

    std::vector<Eigen::MatrixXd> inits;
    if (opts.warm_start) {
        const Eigen::MatrixXd& w = *opts.warm_start;
        if (w.rows() != rows || w.cols() > n) {
            throw DimensionError("warm start must be N x m with m <= n");
        }
        auto rng = start_rng(opts.seed, -1);
        Eigen::MatrixXd x = random_coords(rows, n, 1e-3 * spread, rng);
        x.leftCols(w.cols()) = w;
        inits.push_back(std::move(x));
    }
    for (int s = 0; s < opts.starts; ++s) {
        auto rng = start_rng(opts.seed, s);
        inits.push_back(random_coords(rows, n, spread, rng));
    }

    const score::ObjectiveWithGradient fg = [&](const Eigen::VectorXd& flat,
                                                Eigen::VectorXd& g) {
        Eigen::MatrixXd grad;
        const double f = raw_stress_gradient(D, ConstCoords(flat.data(), rows, n), grad);
        g = Eigen::Map<const Eigen::VectorXd>(grad.data(), grad.size());
        return f;
    };
    const score::Projection centre = [&](Eigen::VectorXd& flat) { centre_columns(flat, rows, n); };
    const score::MinimizeOptions mopts{opts.max_iters, 1e-6, opts.tol, opts.memory};

    Embedding out;
    out.method = EmbeddingMethod::gmds;
    for (std::size_t s = 0; s < inits.size(); ++s) {
        const Eigen::VectorXd x0 = Eigen::Map<const Eigen::VectorXd>(inits[s].data(), inits[s].size());
        const auto m = score::minimize_with_gradient(fg, x0, mopts, centre);
        if (out.best_start < 0 || m.f < out.stress) {
            out.stress = m.f;
            out.coords = ConstCoords(m.x.data(), rows, n);
            out.best_start = static_cast<int>(s);
        }
    }
    out.stress = raw_stress(D, out.coords);
    return out;
}

Embedding torgerson_embed(const Eigen::MatrixXd& D, int n) {
    require_dissimilarity(D);
    if (n < 1) throw DimensionError("embedding dimension must be at least 1");
    const auto rows = D.rows();

    const Eigen::MatrixXd sq = D.cwiseProduct(D);
    const Eigen::MatrixXd centring =
        Eigen::MatrixXd::Identity(rows, rows) -
        Eigen::MatrixXd::Constant(rows, rows, 1.0 / static_cast<double>(rows));
    const Eigen::MatrixXd t = -0.5 * centring * sq * centring;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (t + t.transpose()));

    Embedding out;
    out.method = EmbeddingMethod::torgerson;
    out.eigenvalues = eig.eigenvalues().reverse();
    Eigen::MatrixXd vectors = eig.eigenvectors().rowwise().reverse();

    const double top = out.eigenvalues[0];
    const double eps = 1e-9 * std::max(top, 0.0);
    out.usable_terms = 0;
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (top > 0.0 && out.eigenvalues[i] > eps) ++out.usable_terms;
        if (out.eigenvalues[i] < -eps) out.negative_mass += -out.eigenvalues[i];
    }

    const int k = std::min(n, out.usable_terms);
    if (k < n) {
        out.warnings.push_back("requested " + std::to_string(n) + " dimensions but only " +
                               std::to_string(out.usable_terms) +
                               " positive eigenvalues are available; output truncated");
    }
    Eigen::MatrixXd axes = vectors.leftCols(k);
    fix_signs(axes);
    out.coords = axes * out.eigenvalues.head(k).cwiseSqrt().asDiagonal();
    out.stress = raw_stress(D, out.coords);
    return out;
}

double correlation_gradient(const Eigen::MatrixXd& D, const Eigen::MatrixXd& coords,
                            Eigen::MatrixXd& grad) {
    const auto rows = coords.rows();
    const Eigen::MatrixXd d = distances_from_coords(coords);
    double mean_data = 0.0, mean_fit = 0.0;
    const double pairs = static_cast<double>(rows * (rows - 1) / 2);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = i + 1; j < rows; ++j) {
            mean_data += D(i, j);
            mean_fit += d(i, j);
        }
    }
    mean_data /= pairs;
    mean_fit /= pairs;
    double aa = 0.0, bb = 0.0, ab = 0.0;
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = i + 1; j < rows; ++j) {
            const double a = D(i, j) - mean_data;
            const double b = d(i, j) - mean_fit;
            aa += a * a;
            bb += b * b;
            ab += a * b;
        }
    }
    if (!(aa > 0.0) || !(bb > 0.0)) {
        throw UndefinedCorrelationError("correlation undefined: zero variance");
    }
    const double norm = std::sqrt(aa * bb);
    const double r = ab / norm;

    // The centring terms vanish because both centred vectors sum to zero.
    grad = Eigen::MatrixXd::Zero(rows, coords.cols());
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = i + 1; j < rows; ++j) {
            if (!(d(i, j) > 0.0)) continue;
            const double dr = (D(i, j) - mean_data) / norm - r * (d(i, j) - mean_fit) / bb;
            const Eigen::RowVectorXd term = (dr / d(i, j)) * (coords.row(i) - coords.row(j));
            grad.row(i) += term;
            grad.row(j) -= term;
        }
    }
    return r;
}

Embedding correlation_embed(const Eigen::MatrixXd& D, int n, const CorrelationOptions& opts) {
    require_dimension(D, n);
    if (opts.starts < 1) throw Error("correlation embedding needs at least one start");
    const auto rows = D.rows();
    // Fails early with UndefinedCorrelationError on a constant D.
    pearson_r(D, D);

    const score::ObjectiveWithGradient fg = [&](const Eigen::VectorXd& flat,
                                                Eigen::VectorXd& g) {
        Eigen::MatrixXd grad;
        double r = 0.0;
        try {
            r = correlation_gradient(D, ConstCoords(flat.data(), rows, n), grad);
        } catch (const UndefinedCorrelationError&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
        g = -Eigen::Map<const Eigen::VectorXd>(grad.data(), grad.size());
        return 1.0 - r;
    };
    // r ignores translation and scale: keep iterates centred at unit RMS size.
    const score::Projection normalize = [&](Eigen::VectorXd& flat) {
        centre_columns(flat, rows, n);
        const double rms = flat.norm() / std::sqrt(static_cast<double>(rows));
        if (rms > 0.0) flat /= rms;
    };
    const score::MinimizeOptions mopts{opts.max_iters, 1e-6, opts.tol, opts.memory};

    Embedding out;
    out.method = EmbeddingMethod::correlation;
    double best_f = 0.0;
    for (int s = 0; s < opts.starts; ++s) {
        auto rng = start_rng(opts.seed, s);
        const Eigen::MatrixXd init = random_coords(rows, n, 1.0, rng);
        const Eigen::VectorXd x0 = Eigen::Map<const Eigen::VectorXd>(init.data(), init.size());
        score::MinimizeResult m;
        try {
            m = score::minimize_with_gradient(fg, x0, mopts, normalize);
        } catch (const score::MinimizationError& e) {
            out.warnings.push_back("start " + std::to_string(s) + " failed: " + e.what());
            continue;
        }
        if (out.best_start < 0 || m.f < best_f) {
            best_f = m.f;
            out.coords = ConstCoords(m.x.data(), rows, n);
            out.best_start = s;
        }
    }
    if (out.best_start < 0) throw Error("every correlation embedding start failed");

    const Eigen::MatrixXd d = distances_from_coords(out.coords);
    const double factor = D.cwiseProduct(d).sum() / d.squaredNorm();
    out.coords *= factor;
    out.r = pearson_r(D, distances_from_coords(out.coords));
    out.stress = raw_stress(D, out.coords);
    return out;
}

}  // namespace shapesim::analysis
