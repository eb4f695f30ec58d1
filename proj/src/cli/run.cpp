#include "shapesim/cli/run.hpp"

#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "shapesim/analysis/cluster.hpp"
#include "shapesim/analysis/embed.hpp"
#include "shapesim/analysis/metrics.hpp"
#include "shapesim/cli/io.hpp"
#include "shapesim/cli/svg.hpp"
#include "shapesim/error.hpp"
#include "shapesim/score.hpp"

namespace shapesim::cli {

namespace {

struct Context {
    const RunConfig& cfg;
    std::ostream& out;
    std::ostream& err;

    fs::path artifact(const std::string& default_name) const {
        return cfg.out ? *cfg.out : cfg.output_dir / default_name;
    }
    fs::path extra(const std::string& name) const { return cfg.output_dir / name; }

    void write(const fs::path& path, const std::string& text) const {
        write_text_file(path, text);
        fmt::print(out, "wrote {}\n", path.string());
    }
};

void require_inputs(const RunConfig& cfg, std::size_t n) {
    if (cfg.inputs.size() != n) {
        throw Error(fmt::format("{} expects {} input file(s), got {}", to_string(cfg.command), n,
                                cfg.inputs.size()));
    }
}

score::ScoreOptions score_options(const RunConfig& cfg) {
    score::ScoreOptions o;
    if (cfg.starts) o.n_starts = *cfg.starts;
    if (cfg.max_iters) o.max_iters = *cfg.max_iters;
    o.seed = cfg.seed;
    return o;
}

DissimilarityMatrix load_matrix(const fs::path& p) {
    auto m = parse_matrix_csv(read_text_file(p), p.string());
    analysis::require_dissimilarity(m.entries);
    return m;
}

LabeledPoints load_embedding(const fs::path& p) {
    return parse_embedding_csv(read_text_file(p), p.string());
}

void require_same_labels(const std::vector<std::string>& a, const std::vector<std::string>& b,
                         const std::string& what) {
    if (a != b) throw DimensionError(what + ": labels do not match the matrix labels");
}

void cmd_score(const Context& c) {
    require_inputs(c.cfg, 2);
    const auto fixed = load_shape_file(c.cfg.inputs[0]);
    const auto mobile = load_shape_file(c.cfg.inputs[1]);
    const auto r = score::dissimilarity(fixed, mobile, score_options(c.cfg));
    const auto& t = r.best_transform;
    const std::string text = fmt::format(
        "fixed,mobile,score,log_scale,angle,tx,ty\n{},{},{:.4f},{:.17g},{:.17g},{:.17g},{:.17g}\n",
        fixed.name(), mobile.name(), r.score, t.log_scale, t.angle, t.tx, t.ty);
    if (c.cfg.out) {
        c.write(*c.cfg.out, text);
    } else {
        c.out << text;
    }
    if (r.failed_starts > 0) fmt::print(c.err, "warning: {} start(s) failed\n", r.failed_starts);
}

void cmd_matrix(const Context& c) {
    if (c.cfg.inputs.empty()) throw Error("matrix expects a directory or shape files");
    const auto shapes = load_shapes(c.cfg.inputs);
    const auto m = score::dissimilarity_matrix(shapes, score_options(c.cfg), c.cfg.workers);
    c.write(c.artifact("matrix.csv"), format_matrix_csv(m));
    fmt::print(c.out, "shapes: {}\nmax_asymmetry: {:.4f}\n", m.size(), m.asymmetry);
}

void cmd_triangles(const Context& c) {
    require_inputs(c.cfg, 1);
    const auto m = load_matrix(c.cfg.inputs[0]);
    const auto v = analysis::triangle_violations(m.entries);
    fmt::print(c.out, "violating_triples: {}\nviolating_pairs: {} of {}\n", v.count(),
               v.violating_pairs, v.total_pairs);
    if (c.cfg.out) {
        std::string text = "i,j,via\n";
        for (const auto& t : v.triples) {
            text += fmt::format("{},{},{}\n", m.labels[t[0]], m.labels[t[1]], m.labels[t[2]]);
        }
        c.write(*c.cfg.out, text);
    }
}

void cmd_block_cluster(const Context& c) {
    require_inputs(c.cfg, 1);
    const auto m = load_matrix(c.cfg.inputs[0]);
    analysis::GaOptions ga;
    if (c.cfg.restarts) ga.restarts = *c.cfg.restarts;
    if (c.cfg.generations) ga.generations = *c.cfg.generations;
    if (c.cfg.population) ga.population = *c.cfg.population;
    ga.seed = c.cfg.seed;
    const auto a = analysis::block_cluster(m.entries, c.cfg.k, ga);
    c.write(c.artifact("assignment.csv"), format_assignment_csv(m.labels, a));
    fmt::print(c.out, "objective: {:.4f}\neffective_clusters: {}\n", a.objective,
               a.effective_clusters());
}

std::string embedding_report(const DissimilarityMatrix& m, const analysis::Embedding& e) {
    std::string text = fmt::format("method: {}\ndimension: {}\n", analysis::to_string(e.method),
                                   e.coords.cols());
    text += format_quality_report(analysis::quality(m.entries, analysis::distances_from_coords(e.coords)));
    text += fmt::format("stress: {:.6e}\n", e.stress);
    if (e.method == analysis::EmbeddingMethod::correlation) text += fmt::format("r: {:.9f}\n", e.r);
    if (e.method == analysis::EmbeddingMethod::torgerson) {
        text += fmt::format("usable_terms: {}\nnegative_mass: {:.6e}\neigenvalues:", e.usable_terms,
                            e.negative_mass);
        for (double l : e.eigenvalues) text += fmt::format(" {:.6e}", l);
        text += '\n';
    }
    return text;
}

void cmd_embed(const Context& c) {
    require_inputs(c.cfg, 1);
    const auto m = load_matrix(c.cfg.inputs[0]);
    analysis::Embedding e;
    switch (c.cfg.command) {
        case Command::gmds: {
            analysis::GmdsOptions o;
            if (c.cfg.starts) o.starts = *c.cfg.starts;
            if (c.cfg.max_iters) o.max_iters = *c.cfg.max_iters;
            o.seed = c.cfg.seed;
            e = analysis::gmds_embed(m.entries, c.cfg.dim, o);
            break;
        }
        case Command::correlate: {
            analysis::CorrelationOptions o;
            if (c.cfg.starts) o.starts = *c.cfg.starts;
            if (c.cfg.max_iters) o.max_iters = *c.cfg.max_iters;
            o.seed = c.cfg.seed;
            e = analysis::correlation_embed(m.entries, c.cfg.dim, o);
            break;
        }
        default:
            e = analysis::torgerson_embed(m.entries, c.cfg.dim);
    }
    for (const auto& w : e.warnings) fmt::print(c.err, "warning: {}\n", w);
    c.write(c.artifact("embedding.csv"), format_embedding_csv({m.labels, e.coords}));
    const std::string report = embedding_report(m, e);
    c.write(c.extra("quality.txt"), report);
    c.out << report;
}

void cmd_kmeans(const Context& c) {
    require_inputs(c.cfg, 1);
    const auto p = load_embedding(c.cfg.inputs[0]);
    const auto r = analysis::kmeans(p.coords, c.cfg.k, c.cfg.seed);
    c.write(c.artifact("assignment.csv"), format_assignment_csv(p.labels, r.assignment));
    fmt::print(c.out, "wcss: {:.6e}\niterations: {}\n", r.wcss, r.iterations);
}

void cmd_project(const Context& c) {
    require_inputs(c.cfg, 1);
    const auto p = load_embedding(c.cfg.inputs[0]);
    c.write(c.artifact("projected.csv"),
            format_embedding_csv({p.labels, analysis::pca_project(p.coords, c.cfg.dim)}));
}

MapAnchors align_to_anchors(LabeledPoints& p, const fs::path& path, std::ostream& out) {
    const auto a = load_embedding(path);
    if (a.coords.cols() != 2) throw DimensionError("anchors must have two coordinates");
    Eigen::MatrixXd src(a.coords.rows(), 2);
    for (std::size_t i = 0; i < a.labels.size(); ++i) {
        const auto it = std::find(p.labels.begin(), p.labels.end(), a.labels[i]);
        if (it == p.labels.end()) throw Error(fmt::format("anchor '{}' is not in the embedding", a.labels[i]));
        src.row(static_cast<Eigen::Index>(i)) = p.coords.row(it - p.labels.begin());
    }
    const auto fit = analysis::fit_similarity(src, a.coords);
    p.coords = fit.apply(p.coords);
    fmt::print(out, "anchor_fit_rms: {:.6e}\n", fit.rms);
    return {a.labels, a.coords};
}

void cmd_report(const Context& c) {
    require_inputs(c.cfg, 2);
    const auto m = load_matrix(c.cfg.inputs[0]);
    auto p = load_embedding(c.cfg.inputs[1]);
    require_same_labels(p.labels, m.labels, "embedding");
    const Eigen::MatrixXd d = analysis::distances_from_coords(p.coords);

    const std::string report = format_quality_report(analysis::quality(m.entries, d));
    c.write(c.extra("quality.txt"), report);
    c.out << report;
    c.write(c.extra("rank.svg"), render_rank_plot_svg(m.entries, d));
    if (c.cfg.scatter) c.write(c.extra("scatter.svg"), render_scatter_svg(m.entries, d));

    if (p.coords.cols() != 2) {
        fmt::print(c.err, "note: {}D embedding, map skipped\n", p.coords.cols());
        return;
    }
    std::optional<analysis::ClusterAssignment> assignment;
    if (c.cfg.assignment) {
        const auto t = parse_assignment_csv(read_text_file(*c.cfg.assignment),
                                            c.cfg.assignment->string());
        require_same_labels(t.labels, m.labels, "assignment");
        assignment = t.to_assignment();
    }
    std::optional<MapAnchors> anchors;
    if (c.cfg.anchors) anchors = align_to_anchors(p, *c.cfg.anchors, c.out);
    c.write(c.extra("map.svg"), render_map_svg(p.coords, p.labels, assignment, anchors));
}

}  // namespace

std::string to_string(Command c) {
    switch (c) {
        case Command::score: return "score";
        case Command::matrix: return "matrix";
        case Command::triangles: return "triangles";
        case Command::block_cluster: return "block-cluster";
        case Command::gmds: return "gmds";
        case Command::torgerson: return "torgerson";
        case Command::kmeans: return "kmeans";
        case Command::correlate: return "correlate";
        case Command::project: return "project";
        case Command::report: return "report";
    }
    return "unknown";
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const Context c{config, out, err};
    try {
        switch (config.command) {
            case Command::score: cmd_score(c); break;
            case Command::matrix: cmd_matrix(c); break;
            case Command::triangles: cmd_triangles(c); break;
            case Command::block_cluster: cmd_block_cluster(c); break;
            case Command::gmds:
            case Command::torgerson:
            case Command::correlate: cmd_embed(c); break;
            case Command::kmeans: cmd_kmeans(c); break;
            case Command::project: cmd_project(c); break;
            case Command::report: cmd_report(c); break;
        }
    } catch (const std::exception& e) {
        fmt::print(err, "error: {}: {}\n", to_string(config.command), e.what());
        return 1;
    }
    return 0;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Shape dissimilarity scoring and matrix analysis"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    std::vector<std::string> inputs;
    std::string output_dir = ".", out_path, assignment, anchors;
    app.add_option("--out-dir", output_dir, "Directory for generated artifacts")
        ->capture_default_str();
    app.add_option("--out", out_path, "Path of the primary artifact");
    app.add_option("--seed", cfg.seed, "Seed for every stochastic step")->capture_default_str();

    struct SubcommandInfo {
        Command command;
        const char* help;
        const char* inputs_help;
    };
    const SubcommandInfo subcommands[] = {
        {Command::score, "Score shape B against shape A", "A.json B.json"},
        {Command::matrix, "Dissimilarity matrix of all shapes", "directory or shape files"},
        {Command::triangles, "Count triangle inequality violations", "D.csv"},
        {Command::block_cluster, "Block-matrix clustering (genetic algorithm)", "D.csv"},
        {Command::gmds, "Embedding by direct stress minimization", "D.csv"},
        {Command::torgerson, "Classical (Torgerson) MDS embedding", "D.csv"},
        {Command::kmeans, "K-means on embedded coordinates", "E.csv"},
        {Command::correlate, "Embedding maximizing correlation with D", "D.csv"},
        {Command::project, "PCA projection of an embedding", "E.csv"},
        {Command::report, "Quality report and figures", "D.csv E.csv"},
    };
    int starts = 0, max_iters = 0, restarts = 0, generations = 0, population = 0;
    for (const auto& s : subcommands) {
        auto* sub = app.add_subcommand(to_string(s.command), s.help);
        sub->add_option("inputs", inputs, s.inputs_help)->required();
        sub->callback([&cfg, cmd = s.command] { cfg.command = cmd; });
        switch (s.command) {
            case Command::score:
            case Command::matrix:
                sub->add_option("--starts", starts, "Starting angles per pair (default 8)");
                sub->add_option("--max-iters", max_iters, "Minimizer iterations per start (default 200)");
                if (s.command == Command::matrix) {
                    sub->add_option("--workers", cfg.workers, "Worker threads")->capture_default_str();
                }
                break;
            case Command::block_cluster:
                sub->add_option("--k", cfg.k, "Cluster count")->required();
                sub->add_option("--restarts", restarts, "Independent GA runs (default 5)");
                sub->add_option("--generations", generations, "Generations per run (default 500)");
                sub->add_option("--population", population, "Population size (default 50)");
                break;
            case Command::kmeans:
                sub->add_option("--k", cfg.k, "Cluster count")->required();
                break;
            case Command::gmds:
            case Command::correlate:
                sub->add_option("--starts", starts, "Random starts (default 5)");
                sub->add_option("--max-iters", max_iters, "Minimizer iterations (default 5000)");
                [[fallthrough]];
            case Command::torgerson:
            case Command::project:
                sub->add_option("--dim", cfg.dim, "Target dimension")->required();
                break;
            case Command::report:
                sub->add_option("--assignment", assignment, "Assignment CSV colouring the map");
                sub->add_option("--anchors", anchors, "Anchor CSV (label,x1,x2) to align the map");
                sub->add_flag("--scatter", cfg.scatter, "Also write the D vs d scatter plot");
                break;
            case Command::triangles:
                break;
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    cfg.inputs.assign(inputs.begin(), inputs.end());
    cfg.output_dir = output_dir;
    if (!out_path.empty()) cfg.out = out_path;
    if (!assignment.empty()) cfg.assignment = assignment;
    if (!anchors.empty()) cfg.anchors = anchors;
    if (starts) cfg.starts = starts;
    if (max_iters) cfg.max_iters = max_iters;
    if (restarts) cfg.restarts = restarts;
    if (generations) cfg.generations = generations;
    if (population) cfg.population = population;
    return run(cfg, out, err);
}

}  // namespace shapesim::cli
