// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Every check compares against an oracle computed here or in the
// test support library, never against stored numbers.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "shapesim/analysis/cluster.hpp"
#include "shapesim/analysis/embed.hpp"
#include "shapesim/analysis/metrics.hpp"
#include "shapesim/cli/io.hpp"
#include "shapesim/cli/run.hpp"
#include "shapesim/geometry.hpp"
#include "shapesim/minimize.hpp"
#include "shapesim/score.hpp"
#include "support/test_shapes.hpp"

namespace {

using namespace shapesim;
using geometry::Shape;
namespace fs = std::filesystem;

struct Outcome {
    bool pass;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Eigen::MatrixXd planar_distances(int set, Eigen::MatrixXd* points = nullptr) {
    std::mt19937_64 rng(1000 + static_cast<std::uint64_t>(set));
    const Eigen::MatrixXd p = testing::random_points(10, 2, rng) * 10.0;
    if (points) *points = p;
    return testing::euclidean_distances(p);
}

double upper_norm2(const Eigen::MatrixXd& D) { return 0.5 * D.squaredNorm(); }

Shape partner_shape(int k, std::mt19937_64& rng) {
    using testing::square_ring;
    switch (k % 4) {
        case 0: {
            std::uniform_real_distribution<double> shift(-0.8, 0.8);
            return testing::random_star("b", rng, 5 + k % 13, {shift(rng), shift(rng)}, 0.3, 1.1);
        }
        case 1:
            return Shape("holed", {square_ring(-1, -1, 2), square_ring(-0.4, -0.3, 0.8)});
        case 2:
            return Shape("islands", {square_ring(-1, -1, 0.9), square_ring(0.2, 0.1, 0.7)});
        default: {
            const Shape s = testing::random_star("c", rng, 12, {0, 0}, 0.5, 1.0);
            return geometry::apply_transform(s, testing::random_similarity(rng, 0.6, 1.6, 0.5));
        }
    }
}

Outcome ac1_overlap_exactness() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(11);
    int bad = 0;
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
        const Shape a = testing::random_star("a", rng, 6 + k % 15, {0, 0}, 0.3, 1.2);
        const Shape b = partner_shape(k, rng);
        const auto exact = geometry::overlap(a, b);
        const auto mc = geometry::mc_overlap_oracle(a, b, 1'000'000, 5000 + k);
        const double z[] = {
            std::abs(exact.intersection - mc.estimate.intersection) / mc.intersection_se,
            std::abs(exact.delta_a - mc.estimate.delta_a) / mc.delta_a_se,
            std::abs(exact.delta_b - mc.estimate.delta_b) / mc.delta_b_se};
        for (double v : z) {
            worst = std::max(worst, v);
            bad += v > 4.0;
        }
    }
    const double t = seconds_since(t0);
    return {bad == 0 && t < 60.0,
            fmt::format("200 pairs, {} of 600 comparisons beyond 4 SE, max {:.2f} SE, {:.1f} s", bad,
                        worst, t)};
}

Outcome ac2_score_invariance() {
    std::mt19937_64 rng(21);
    double worst_copy = 0.0;
    for (int k = 0; k < 20; ++k) {
        const Shape s = testing::random_star("s", rng, 8 + k % 9, {0, 0}, 0.35, 1.0);
        const auto t = testing::random_similarity(rng, 0.25, 4.0, 5.0);
        worst_copy = std::max(worst_copy, score::dissimilarity(s, geometry::apply_transform(s, t)).score);
    }
    std::vector<Shape> suite;
    for (int k = 0; k < 5; ++k) {
        suite.push_back(testing::random_star("t" + std::to_string(k), rng, 9 + k, {0, 0}, 0.4, 1.0));
    }
    double worst_gap = 0.0;
    for (int i = 0; i < 5; ++i) {
        for (int j = i + 1; j < 5; ++j) {
            const double ab = score::dissimilarity(suite[i], suite[j]).score;
            const double ba = score::dissimilarity(suite[j], suite[i]).score;
            worst_gap = std::max(worst_gap, std::abs(ab - ba));
        }
    }
    return {worst_copy < 0.5 && worst_gap <= 1.0,
            fmt::format("max copy score {:.2e} (< 0.5), max |s(A,B)-s(B,A)| {:.4f} (<= 1.0)",
                        worst_copy, worst_gap)};
}

Outcome ac3_half_overlap() {
    const Shape a = testing::square("a");
    const Shape b = testing::square("b", 0.5, 0.0);
    const double at_identity = score::objective(a, b, {});
    const double minimized = score::dissimilarity(a, b).score;
    return {at_identity == 50.0 && minimized < 0.5,
            fmt::format("identity objective {:.17g} (== 50), minimized {:.2e} (< 0.5)", at_identity,
                        minimized)};
}

Outcome ac4_minimizer() {
    const Eigen::Vector4d c(1.5, -2.0, 0.25, 3.0);
    const score::Objective bowl = [&](const Eigen::VectorXd& x) {
        return (x - c).cwiseProduct(Eigen::Vector4d(1, 4, 9, 16)).dot(x - c);
    };
    const auto q = score::minimize(bowl, Eigen::VectorXd::Zero(4), {});
    const double q_err = (q.x - c).cwiseAbs().maxCoeff();

    const score::Objective rosen = [](const Eigen::VectorXd& x) {
        return (1.0 - x[0]) * (1.0 - x[0]) + 100.0 * std::pow(x[1] - x[0] * x[0], 2);
    };
    score::MinimizeOptions opts;
    opts.max_iters = 200;
    const auto r = score::minimize(rosen, Eigen::Vector4d(-1.2, 1.0, 0.0, 0.0), opts);
    return {q_err <= 1e-6 && r.f < 1e-6 && r.iterations <= 200,
            fmt::format("bowl max error {:.1e} (<= 1e-6); Rosenbrock f {:.1e} (< 1e-6) in {} iterations",
                        q_err, r.f, r.iterations)};
}

Outcome ac5_block_clustering() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int mismatches = 0;
    for (int t = 0; t < 25; ++t) {
        const int n = 5 + t % 4;
        const int k = 2 + t % 2;
        Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) D(i, j) = D(j, i) = u(rng);
        }
        analysis::GaOptions ga;
        ga.restarts = 5;
        ga.seed = static_cast<std::uint64_t>(t);
        const double got = analysis::block_cluster(D, k, ga).objective;
        const double best = analysis::brute_force_block_cluster(D, k).objective;
        // Equal partitions give bit-identical sums; 1e-12 only absorbs
        // summation order between distinct tied partitions.
        mismatches += std::abs(got - best) > 1e-12 * std::max(1.0, best);
    }
    const double t = seconds_since(t0);
    return {mismatches == 0 && t < 30.0,
            fmt::format("25 instances (N 5-8, K 2-3), {} mismatches, {:.1f} s (< 30 s)", mismatches, t)};
}

Outcome ac6_gmds_recovery() {
    double worst_stress = 0.0, worst_proc = 0.0, worst_res = 0.0, worst_defect = 0.0;
    for (int s = 0; s < 10; ++s) {
        Eigen::MatrixXd p;
        const auto D = planar_distances(s, &p);
        analysis::GmdsOptions opts;
        opts.seed = static_cast<std::uint64_t>(s);
        const auto e = analysis::gmds_embed(D, 2, opts);
        const auto q = analysis::quality(D, analysis::distances_from_coords(e.coords));
        worst_stress = std::max(worst_stress, e.stress / upper_norm2(D));
        worst_proc = std::max(worst_proc, testing::procrustes_residual(e.coords, p));
        worst_res = std::max(worst_res, q.residual_ratio);
        worst_defect = std::max(worst_defect, q.pythagoras_defect);
    }
    return {worst_stress < 1e-10 && worst_proc < 1e-5 && worst_res < 0.01 && worst_defect < 1e-6,
            fmt::format("stress/|D|^2 {:.1e}, Procrustes {:.1e}, residual {:.1e} %, defect {:.1e}",
                        worst_stress, worst_proc, worst_res, worst_defect)};
}

Outcome ac7_torgerson() {
    double worst = 0.0;
    bool two_terms = true;
    for (int s = 0; s < 10; ++s) {
        const auto D = planar_distances(s);
        const auto e = analysis::torgerson_embed(D, 2);
        const auto d = analysis::distances_from_coords(e.coords);
        worst = std::max(worst, (d - D).cwiseAbs().maxCoeff() / D.maxCoeff());
        const double eps = 1e-9 * e.eigenvalues[0];
        two_terms = two_terms && e.usable_terms == 2 && (e.eigenvalues.array() > eps).count() == 2;
    }
    Eigen::MatrixXd bad(3, 3);
    bad << 0, 3, 1, 3, 0, 1, 1, 1, 0;
    const auto violations = analysis::triangle_violations(bad).count();
    const auto e = analysis::torgerson_embed(bad, 2);
    const double lowest = e.eigenvalues.minCoeff();
    return {worst <= 1e-9 && two_terms && violations == 1 && lowest < 0.0,
            fmt::format("max relative error {:.1e}, two terms above threshold: {}, "
                        "one-violation matrix lowest eigenvalue {:.3f}",
                        worst, two_terms ? "yes" : "no", lowest)};
}

Outcome ac8_monotonicity() {
    // Euclidean distances in 10D with multiplicative symmetric noise.
    std::mt19937_64 rng(81);
    const Eigen::MatrixXd p = testing::random_points(25, 10, rng);
    Eigen::MatrixXd D = testing::euclidean_distances(p);
    std::uniform_real_distribution<double> noise(0.7, 1.3);
    for (int i = 0; i < 25; ++i) {
        for (int j = i + 1; j < 25; ++j) D(i, j) = D(j, i) = D(i, j) * noise(rng);
    }
    const bool non_euclidean = analysis::torgerson_embed(D, 2).negative_mass > 0.0;

    std::vector<double> residual;
    Eigen::MatrixXd ten;
    for (int n : {2, 3, 5, 10}) {
        const auto e = analysis::gmds_embed(D, n);
        residual.push_back(analysis::quality(D, analysis::distances_from_coords(e.coords)).residual_ratio);
        if (n == 10) ten = e.coords;
    }
    bool monotone = true;
    for (std::size_t i = 1; i < residual.size(); ++i) monotone = monotone && residual[i] <= residual[i - 1] + 1e-9;
    const double projected =
        analysis::quality(D, analysis::distances_from_coords(analysis::pca_project(ten, 2))).residual_ratio;
    return {non_euclidean && monotone && residual[0] < projected,
            fmt::format("residual % at n=2,3,5,10: {:.2f} {:.2f} {:.2f} {:.2f}; PCA of 10D to 2D {:.2f}",
                        residual[0], residual[1], residual[2], residual[3], projected)};
}

Outcome ac9_correlation() {
    const auto D = planar_distances(0);
    const auto e = analysis::correlation_embed(D, 2);
    const double rescaled = analysis::pearson_r(D, analysis::distances_from_coords(10.0 * e.coords));
    const double gap = std::abs(rescaled - e.r);
    return {e.r > 0.9999 && gap <= 1e-12,
            fmt::format("r = {:.12f} (> 0.9999), change under x10 rescale {:.1e} (<= 1e-12)", e.r, gap)};
}

Outcome ac10_gradient_check() {
    std::mt19937_64 rng(101);
    double worst = 0.0;
    for (int t = 0; t < 5; ++t) {
        const int n = 6 + t;
        const Eigen::MatrixXd x = testing::random_points(n, 2 + t % 2, rng) * 5.0;
        Eigen::MatrixXd D = testing::euclidean_distances(testing::random_points(n, 4, rng)) * 5.0;
        Eigen::MatrixXd g;
        analysis::raw_stress_gradient(D, x, g);
        Eigen::MatrixXd fd(x.rows(), x.cols());
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            for (Eigen::Index k = 0; k < x.cols(); ++k) {
                const double h = 1e-6 * std::max(1.0, std::abs(x(i, k)));
                Eigen::MatrixXd up = x, down = x;
                up(i, k) += h;
                down(i, k) -= h;
                fd(i, k) = (analysis::raw_stress(D, up) - analysis::raw_stress(D, down)) / (2 * h);
            }
        }
        worst = std::max(worst, (g - fd).norm() / g.norm());
    }
    return {worst < 1e-6, fmt::format("5 configurations, max relative difference {:.1e}", worst)};
}

std::string shape_json(const Shape& s) {
    std::string out = fmt::format("{{\"name\": \"{}\", \"rings\": [", s.name());
    for (std::size_t r = 0; r < s.rings().size(); ++r) {
        out += r ? ", [" : "[";
        const auto& v = s.rings()[r].vertices();
        for (std::size_t i = 0; i < v.size(); ++i) {
            out += fmt::format("{}[{:.17g}, {:.17g}]", i ? ", " : "", v[i].x, v[i].y);
        }
        out += "]";
    }
    return out + "]}\n";
}

int cli(std::vector<std::string> args) {
    args.insert(args.begin(), "shapesim");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
    if (code != 0) std::fprintf(stderr, "%s", err.str().c_str());
    return code;
}

Outcome ac11_cli_pipeline() {
    const fs::path root = fs::temp_directory_path() / "shapesim_acceptance";
    fs::remove_all(root);
    std::mt19937_64 rng(111);
    for (int k = 0; k < 6; ++k) {
        const std::string name = "shape" + std::to_string(k);
        Shape s = testing::random_star(name, rng, 8 + k, {0, 0}, 0.4, 1.0);
        if (k == 5) {
            s = Shape(name, {testing::square_ring(-1, -1, 2), testing::square_ring(-0.3, -0.3, 0.6)});
        }
        cli::write_text_file(root / "shapes" / (name + ".json"), shape_json(s));
    }
    const std::vector<std::string> artifacts{"matrix.csv",  "embedding.csv", "assignment.csv",
                                             "quality.txt", "rank.svg",      "scatter.svg",
                                             "map.svg"};
    for (int run = 0; run < 2; ++run) {
        const std::string out = (root / ("run" + std::to_string(run))).string();
        const std::string seed = "7";
        if (cli({"matrix", (root / "shapes").string(), "--out-dir", out, "--seed", seed}) ||
            cli({"gmds", out + "/matrix.csv", "--dim", "2", "--out-dir", out, "--seed", seed}) ||
            cli({"block-cluster", out + "/matrix.csv", "--k", "2", "--out-dir", out, "--seed", seed}) ||
            cli({"report", out + "/matrix.csv", out + "/embedding.csv", "--assignment",
                 out + "/assignment.csv", "--scatter", "--out-dir", out})) {
            return {false, "a pipeline step failed"};
        }
    }
    int differing = 0;
    for (const auto& f : artifacts) {
        differing += cli::read_text_file(root / "run0" / f) != cli::read_text_file(root / "run1" / f);
    }
    const fs::path r0 = root / "run0";
    const std::string m = cli::read_text_file(r0 / "matrix.csv");
    const std::string e = cli::read_text_file(r0 / "embedding.csv");
    const std::string a = cli::read_text_file(r0 / "assignment.csv");
    const auto matrix = cli::parse_matrix_csv(m, "matrix.csv");
    const auto embedding = cli::parse_embedding_csv(e, "embedding.csv");
    const auto table = cli::parse_assignment_csv(a, "assignment.csv");
    const bool lossless = cli::format_matrix_csv(matrix) == m &&
                          cli::format_embedding_csv(embedding) == e &&
                          cli::format_assignment_csv(table.labels, table.to_assignment()) == a &&
                          matrix.size() == 6 && embedding.coords.rows() == 6;
    fs::remove_all(root);
    return {differing == 0 && lossless,
            fmt::format("{} artifacts, {} differ between runs; CSV reload lossless: {}",
                        artifacts.size(), differing, lossless ? "yes" : "no")};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"AC1  overlap exactness vs Monte Carlo", ac1_overlap_exactness},
        {"AC2  score identity and symmetry", ac2_score_invariance},
        {"AC3  half-overlap squares", ac3_half_overlap},
        {"AC4  minimizer sanity", ac4_minimizer},
        {"AC5  block clustering vs brute force", ac5_block_clustering},
        {"AC6  GMDS exact recovery", ac6_gmds_recovery},
        {"AC7  Torgerson exact recovery", ac7_torgerson},
        {"AC8  GMDS quality monotone in dimension", ac8_monotonicity},
        {"AC9  correlation embedding", ac9_correlation},
        {"AC10 stress gradient check", ac10_gradient_check},
        {"AC11 CLI round-trip and determinism", ac11_cli_pipeline},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures == 0 ? 0 : 1;
}
