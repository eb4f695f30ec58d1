#include "shapesim/cli/svg.hpp"

#include <algorithm>
#include <array>

#include <fmt/format.h>

#include "shapesim/error.hpp"

namespace shapesim::cli {

namespace {

constexpr double kSize = 640.0;
constexpr double kMargin = 50.0;

constexpr std::array<const char*, 10> kPalette = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string header() {
    return fmt::format(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0:.0f}\" height=\"{0:.0f}\" "
        "viewBox=\"0 0 {0:.0f} {0:.0f}\">\n"
        "<rect x=\"0\" y=\"0\" width=\"{0:.0f}\" height=\"{0:.0f}\" fill=\"white\"/>\n",
        kSize);
}

// Data to pixel mapping with y pointing up; equal_axes keeps aspect ratio.
struct Frame {
    double min_x, min_y, scale_x, scale_y, off_x, off_y;

    Frame(double x0, double y0, double x1, double y1, bool equal_axes) {
        const double avail = kSize - 2 * kMargin;
        const double w = x1 - x0, h = y1 - y0;
        double sx = w > 0 ? avail / w : 1.0;
        double sy = h > 0 ? avail / h : 1.0;
        if (equal_axes) sx = sy = std::min(w > 0 ? sx : sy, h > 0 ? sy : sx);
        min_x = x0;
        min_y = y0;
        scale_x = sx;
        scale_y = sy;
        off_x = kMargin + (avail - w * sx) / 2;
        off_y = kMargin + (avail - h * sy) / 2;
    }
    double px(double x) const { return off_x + (x - min_x) * scale_x; }
    double py(double y) const { return kSize - (off_y + (y - min_y) * scale_y); }
};

void require_square_pair(const Eigen::MatrixXd& D, const Eigen::MatrixXd& d) {
    if (D.rows() != D.cols() || d.rows() != d.cols() || D.rows() != d.rows()) {
        throw DimensionError("plot needs two square matrices of the same size");
    }
    if (D.rows() < 2) throw DimensionError("plot needs at least 2 objects");
}

std::vector<std::pair<double, double>> upper_pairs(const Eigen::MatrixXd& D,
                                                   const Eigen::MatrixXd& d) {
    std::vector<std::pair<double, double>> v;
    for (Eigen::Index i = 0; i < D.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < D.rows(); ++j) v.emplace_back(D(i, j), d(i, j));
    }
    return v;
}

std::string axes(const Frame& f, double x0, double y0, double x1, double y1,
                 const std::string& xlabel, const std::string& ylabel) {
    std::string out = "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n";
    out += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\"/>\n",
                       f.px(x0), f.py(y0), f.px(x1), f.py(y0));
    out += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\"/>\n",
                       f.px(x0), f.py(y0), f.px(x0), f.py(y1));
    out += "</g>\n";
    out += fmt::format(
        "<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
        kSize / 2, kSize - 15.0, xml_escape(xlabel));
    out += fmt::format(
        "<text x=\"15\" y=\"{:.2f}\" font-size=\"12\" text-anchor=\"middle\" "
        "transform=\"rotate(-90 15 {:.2f})\">{}</text>\n",
        kSize / 2, kSize / 2, xml_escape(ylabel));
    out += fmt::format(
        "<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"10\" text-anchor=\"end\">{:.4g}</text>\n",
        f.px(x1), f.py(y0) + 14, x1);
    out += fmt::format(
        "<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"10\" text-anchor=\"end\">{:.4g}</text>\n",
        f.px(x0) - 4, f.py(y1) + 4, y1);
    return out;
}

std::string polyline(const Frame& f, const std::vector<double>& ys, const char* colour,
                     const char* cls) {
    std::string pts;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        if (i) pts += ' ';
        pts += fmt::format("{:.2f},{:.2f}", f.px(static_cast<double>(i)), f.py(ys[i]));
    }
    return fmt::format(
        "<polyline class=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
        cls, colour, pts);
}

}  // namespace

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string render_map_svg(const Eigen::MatrixXd& coords, const std::vector<std::string>& labels,
                           const std::optional<analysis::ClusterAssignment>& assignment,
                           const std::optional<MapAnchors>& anchors) {
    if (coords.rows() == 0) throw DimensionError("map needs at least one point");
    if (coords.cols() != 2) {
        throw DimensionError(fmt::format("map needs a 2D embedding, got {} columns", coords.cols()));
    }
    if (static_cast<Eigen::Index>(labels.size()) != coords.rows()) {
        throw DimensionError("map labels and points differ in number");
    }
    std::vector<int> cluster;
    if (assignment) {
        if (assignment->membership.cols() != coords.rows()) {
            throw DimensionError("assignment and points differ in number");
        }
        cluster = assignment->cluster_of();
    }
    if (anchors && (anchors->coords.cols() != 2 ||
                    static_cast<Eigen::Index>(anchors->labels.size()) != anchors->coords.rows())) {
        throw DimensionError("anchors must be labeled 2D points");
    }

    Eigen::Vector2d lo = coords.colwise().minCoeff(), hi = coords.colwise().maxCoeff();
    if (anchors && anchors->coords.rows() > 0) {
        lo = lo.cwiseMin(anchors->coords.colwise().minCoeff().transpose());
        hi = hi.cwiseMax(anchors->coords.colwise().maxCoeff().transpose());
    }
    const Frame f(lo.x(), lo.y(), hi.x(), hi.y(), true);

    std::string out = header();
    if (anchors) {
        out += "<g class=\"anchors\" stroke=\"#555555\" stroke-width=\"1\">\n";
        for (Eigen::Index i = 0; i < anchors->coords.rows(); ++i) {
            const double x = f.px(anchors->coords(i, 0)), y = f.py(anchors->coords(i, 1));
            out += fmt::format(
                "<path class=\"anchor\" d=\"M {:.2f} {:.2f} L {:.2f} {:.2f} M {:.2f} {:.2f} L "
                "{:.2f} {:.2f}\"><title>{}</title></path>\n",
                x - 4, y - 4, x + 4, y + 4, x - 4, y + 4, x + 4, y - 4,
                xml_escape(anchors->labels[i]));
        }
        out += "</g>\n";
    }
    out += "<g class=\"points\" stroke=\"black\" stroke-width=\"0.5\">\n";
    for (Eigen::Index i = 0; i < coords.rows(); ++i) {
        const char* fill = assignment ? kPalette[cluster[i] % kPalette.size()] : kPalette[0];
        out += fmt::format("<circle class=\"point\" cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"5\" fill=\"{}\"/>\n",
                           f.px(coords(i, 0)), f.py(coords(i, 1)), fill);
    }
    out += "</g>\n";
    if (assignment) {
        out += "<g class=\"centroids\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\">\n";
        for (const auto& c : assignment->centroid_index) {
            if (!c) continue;
            out += fmt::format("<circle class=\"centroid\" cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"9\"/>\n",
                               f.px(coords(*c, 0)), f.py(coords(*c, 1)));
        }
        out += "</g>\n";
    }
    out += "<g class=\"labels\" font-size=\"11\" font-family=\"sans-serif\">\n";
    for (Eigen::Index i = 0; i < coords.rows(); ++i) {
        out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\">{}</text>\n", f.px(coords(i, 0)) + 7,
                           f.py(coords(i, 1)) - 7, xml_escape(labels[i]));
    }
    out += "</g>\n</svg>\n";
    return out;
}

std::string render_rank_plot_svg(const Eigen::MatrixXd& D, const Eigen::MatrixXd& d) {
    require_square_pair(D, d);
    auto pairs = upper_pairs(D, d);
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<double> data, fit;
    double top = 0.0;
    for (const auto& [a, b] : pairs) {
        data.push_back(a);
        fit.push_back(b);
        top = std::max({top, a, b});
    }
    const double last = static_cast<double>(pairs.size() - 1);
    const Frame f(0.0, 0.0, std::max(last, 1.0), top > 0 ? top : 1.0, false);

    std::string out = header();
    out += axes(f, 0.0, 0.0, std::max(last, 1.0), top > 0 ? top : 1.0, "rank of matrix entry",
                "value");
    out += polyline(f, data, "blue", "data");
    out += polyline(f, fit, "red", "fit");
    out += "</svg>\n";
    return out;
}

std::string render_scatter_svg(const Eigen::MatrixXd& D, const Eigen::MatrixXd& d) {
    require_square_pair(D, d);
    const auto pairs = upper_pairs(D, d);
    double top = 0.0;
    for (const auto& [a, b] : pairs) top = std::max({top, a, b});
    if (!(top > 0)) top = 1.0;
    const Frame f(0.0, 0.0, top, top, true);

    std::string out = header();
    out += axes(f, 0.0, 0.0, top, top, "data D", "fitted d");
    out += fmt::format(
        "<line class=\"identity\" x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" "
        "stroke=\"blue\" stroke-width=\"1\"/>\n",
        f.px(0), f.py(0), f.px(top), f.py(top));
    out += "<g class=\"pairs\" fill=\"red\">\n";
    for (const auto& [a, b] : pairs) {
        out += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"2\"/>\n", f.px(a), f.py(b));
    }
    out += "</g>\n</svg>\n";
    return out;
}

}  // namespace shapesim::cli
