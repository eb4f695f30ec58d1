#include "shapesim/analysis/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shapesim/error.hpp"

namespace shapesim::analysis {

namespace {

Eigen::VectorXd upper_triangle(const Eigen::MatrixXd& m) {
    const auto n = m.rows();
    Eigen::VectorXd v(n * (n - 1) / 2);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) v[k++] = m(i, j);
    }
    return v;
}

void require_same_shape(const Eigen::MatrixXd& D, const Eigen::MatrixXd& d) {
    if (D.rows() != D.cols() || d.rows() != d.cols() || D.rows() != d.rows()) {
        throw DimensionError("matrices must be square and of the same size");
    }
}

// Sign convention for eigenvector-derived axes: largest-magnitude
// component positive, so outputs are reproducible.
void fix_signs(Eigen::MatrixXd& vectors) {
    for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
        Eigen::Index at = 0;
        vectors.col(c).cwiseAbs().maxCoeff(&at);
        if (vectors(at, c) < 0.0) vectors.col(c) *= -1.0;
    }
}

}  // namespace

void require_dissimilarity(const Eigen::MatrixXd& D) {
    if (D.rows() != D.cols()) throw DimensionError("dissimilarity matrix must be square");
    if (D.rows() < 2) throw DimensionError("dissimilarity matrix needs at least 2 objects");
    if (!D.allFinite()) throw Error("dissimilarity matrix has non-finite entries");
    const double scale = std::max(1.0, D.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < D.rows(); ++i) {
        if (D(i, i) != 0.0) throw Error("dissimilarity matrix diagonal must be zero");
        for (Eigen::Index j = i + 1; j < D.cols(); ++j) {
            if (std::abs(D(i, j) - D(j, i)) > 1e-9 * scale) {
                throw Error("dissimilarity matrix is not symmetric at (" + std::to_string(i) +
                            ", " + std::to_string(j) + ")");
            }
        }
    }
}

TriangleViolations triangle_violations(const Eigen::MatrixXd& D) {
    require_dissimilarity(D);
    const auto n = D.rows();
    const double eps = 1e-9 * D.maxCoeff();
    TriangleViolations out;
    out.total_pairs = static_cast<std::size_t>(n * (n - 1) / 2);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            bool flagged = false;
            for (Eigen::Index k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                if (D(i, j) > D(i, k) + D(k, j) + eps) {
                    out.triples.push_back({i, j, k});
                    flagged = true;
                }
            }
            out.violating_pairs += flagged;
        }
    }
    return out;
}

Eigen::MatrixXd distances_from_coords(const Eigen::MatrixXd& points) {
    const auto n = points.rows();
    if (n < 2) throw DimensionError("need at least 2 points");
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            d(i, j) = d(j, i) = (points.row(j) - points.row(i)).norm();
        }
    }
    return d;
}

QualityReport quality(const Eigen::MatrixXd& D, const Eigen::MatrixXd& d) {
    require_same_shape(D, d);
    const Eigen::VectorXd a = upper_triangle(D);
    const Eigen::VectorXd b = upper_triangle(d);
    const double data2 = a.squaredNorm();
    if (!(data2 > 0.0)) throw Error("quality: data matrix has zero norm");
    const double fit2 = b.squaredNorm();
    const double residual2 = (a - b).squaredNorm();

    QualityReport q;
    q.norm_ratio = 100.0 * std::sqrt(fit2 / data2);
    q.residual_ratio = 100.0 * std::sqrt(residual2 / data2);
    q.pythagoras_defect = std::abs(fit2 + residual2 - data2) / data2;
    return q;
}

double pearson_r(const Eigen::MatrixXd& D, const Eigen::MatrixXd& d) {
    require_same_shape(D, d);
    const Eigen::VectorXd a = upper_triangle(D);
    const Eigen::VectorXd b = upper_triangle(d);
    const Eigen::VectorXd ca = a.array() - a.mean();
    const Eigen::VectorXd cb = b.array() - b.mean();
    const double va = ca.squaredNorm();
    const double vb = cb.squaredNorm();
    // Relative zero-variance test: a constant vector centres to rounding noise.
    if (va <= 1e-24 * a.squaredNorm() || vb <= 1e-24 * b.squaredNorm()) {
        throw UndefinedCorrelationError("correlation undefined: zero variance");
    }
    return std::clamp(ca.dot(cb) / std::sqrt(va * vb), -1.0, 1.0);
}

Eigen::MatrixXd pca_project(const Eigen::MatrixXd& points, Eigen::Index m) {
    if (m < 1 || m > points.cols()) {
        throw DimensionError("projection dimension must be in [1, " +
                             std::to_string(points.cols()) + "]");
    }
    const Eigen::MatrixXd centred = points.rowwise() - points.colwise().mean();
    const Eigen::MatrixXd cov = centred.transpose() * centred;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    // Eigenvalues ascend; the principal axes are the trailing columns.
    Eigen::MatrixXd axes = eig.eigenvectors().rightCols(m).rowwise().reverse();
    fix_signs(axes);
    return centred * axes;
}

Eigen::MatrixXd SimilarityFit::apply(const Eigen::MatrixXd& points) const {
    return (scale * points * rotation.transpose()).rowwise() + translation;
}

SimilarityFit fit_similarity(const Eigen::MatrixXd& source, const Eigen::MatrixXd& target,
                             bool allow_reflection, bool with_scale) {
    if (source.rows() != target.rows() || source.cols() != target.cols()) {
        throw DimensionError("similarity fit needs matching point sets");
    }
    if (source.rows() < 2) throw DimensionError("similarity fit needs at least 2 points");
    const auto k = source.cols();
    const Eigen::RowVectorXd mu_s = source.colwise().mean();
    const Eigen::RowVectorXd mu_t = target.colwise().mean();
    const Eigen::MatrixXd s = source.rowwise() - mu_s;
    const Eigen::MatrixXd t = target.rowwise() - mu_t;

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(t.transpose() * s,
                                          Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::VectorXd signs = Eigen::VectorXd::Ones(k);
    if (!allow_reflection &&
        (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0) {
        signs[k - 1] = -1.0;
    }

    SimilarityFit fit;
    fit.rotation = svd.matrixU() * signs.asDiagonal() * svd.matrixV().transpose();
    const double var_s = s.squaredNorm();
    fit.scale = with_scale && var_s > 0.0
                    ? svd.singularValues().dot(signs) / var_s
                    : 1.0;
    fit.translation = mu_t - fit.scale * mu_s * fit.rotation.transpose();
    fit.rms = std::sqrt((fit.apply(source) - target).squaredNorm() /
                        static_cast<double>(source.rows()));
    return fit;
}

}  // namespace shapesim::analysis
