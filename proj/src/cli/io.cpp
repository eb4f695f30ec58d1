#include "shapesim/cli/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "shapesim/error.hpp"

namespace shapesim::cli {

namespace {

using nlohmann::json;

struct CsvRow {
    std::vector<std::string> fields;
    int line = 0;
};

[[noreturn]] void fail(const std::string& source, int line, const std::string& what) {
    throw ParseError(fmt::format("{}:{}: {}", source, line, what));
}

// RFC 4180 style: quoted fields may hold commas, quotes ("") and newlines.
std::vector<CsvRow> split_csv(const std::string& text, const std::string& source) {
    std::vector<CsvRow> rows;
    CsvRow row;
    std::string field;
    int line = 1;
    row.line = line;
    bool quoted = false, was_quoted = false, any = false;
    auto end_field = [&] {
        row.fields.push_back(field);
        field.clear();
        was_quoted = false;
    };
    auto end_row = [&] {
        if (any) {
            end_field();
            rows.push_back(std::move(row));
        }
        row = {};
        row.line = line;
        any = false;
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                if (!field.empty() || was_quoted) fail(source, line, "unexpected quote");
                quoted = was_quoted = any = true;
                break;
            case ',':
                end_field();
                any = true;
                break;
            case '\r':
                break;
            case '\n':
                end_row();
                ++line;
                row.line = line;
                break;
            default:
                if (was_quoted) fail(source, line, "text after closing quote");
                field += c;
                any = true;
        }
    }
    if (quoted) fail(source, line, "unterminated quoted field");
    end_row();
    return rows;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos && !s.empty() && s.front() != ' ' &&
        s.back() != ' ') {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

double parse_number(const std::string& s, const std::string& source, int line) {
    double v = 0.0;
    const char* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (s.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
        fail(source, line, fmt::format("not a finite number: '{}'", s));
    }
    return v;
}

int parse_int(const std::string& s, const std::string& source, int line) {
    int v = 0;
    const char* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (s.empty() || ec != std::errc() || ptr != end) {
        fail(source, line, fmt::format("not an integer: '{}'", s));
    }
    return v;
}

void require_unique(const std::vector<std::string>& labels, const std::string& source) {
    std::set<std::string> seen;
    for (const auto& l : labels) {
        if (!seen.insert(l).second) {
            throw DuplicateNameError(fmt::format("{}: duplicate label '{}'", source, l));
        }
    }
}

std::string number4(double v) { return fmt::format("{:.4f}", v == 0.0 ? 0.0 : v); }

}  // namespace

geometry::Shape parse_shape(const std::string& text, const std::string& source) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto upto = std::min<std::size_t>(e.byte, text.size());
        const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + upto, '\n'));
        fail(source, line, e.what());
    }
    auto bad = [&](const std::string& what) -> ParseError {
        return ParseError(fmt::format("{}: {}", source, what));
    };
    if (!doc.is_object()) throw bad("top level must be an object");
    if (!doc.contains("name") || !doc["name"].is_string()) throw bad("\"name\" must be a string");
    if (!doc.contains("rings") || !doc["rings"].is_array()) throw bad("\"rings\" must be an array");

    std::vector<geometry::Ring> rings;
    const auto& jr = doc["rings"];
    for (std::size_t r = 0; r < jr.size(); ++r) {
        if (!jr[r].is_array()) throw bad(fmt::format("ring {} must be an array", r));
        std::vector<geometry::Point> pts;
        for (std::size_t v = 0; v < jr[r].size(); ++v) {
            const auto& p = jr[r][v];
            if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
                throw bad(fmt::format("ring {} vertex {} must be an [x, y] pair", r, v));
            }
            pts.push_back({p[0].get<double>(), p[1].get<double>()});
        }
        try {
            rings.emplace_back(std::move(pts));
        } catch (const InvalidRingError& e) {
            throw InvalidRingError(fmt::format("{}: ring {}: {}", source, r, e.what()));
        }
    }
    try {
        return geometry::Shape(doc["name"].get<std::string>(), std::move(rings));
    } catch (const DegenerateShapeError& e) {
        throw DegenerateShapeError(fmt::format("{}: {}", source, e.what()));
    }
}

geometry::Shape load_shape_file(const fs::path& path) {
    return parse_shape(read_text_file(path), path.string());
}

std::vector<geometry::Shape> load_shapes(const std::vector<fs::path>& paths) {
    std::vector<fs::path> files;
    for (const auto& p : paths) {
        if (fs::is_directory(p)) {
            std::vector<fs::path> found;
            for (const auto& entry : fs::directory_iterator(p)) {
                if (entry.is_regular_file() && entry.path().extension() == ".json") {
                    found.push_back(entry.path());
                }
            }
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        } else {
            files.push_back(p);
        }
    }
    std::vector<geometry::Shape> shapes;
    std::set<std::string> names;
    for (const auto& f : files) {
        shapes.push_back(load_shape_file(f));
        if (!names.insert(shapes.back().name()).second) {
            throw DuplicateNameError(
                fmt::format("{}: shape name '{}' already used", f.string(), shapes.back().name()));
        }
    }
    return shapes;
}

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(fmt::format("cannot open '{}'", path.string()));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
}

std::string format_matrix_csv(const DissimilarityMatrix& m) {
    if (static_cast<Eigen::Index>(m.labels.size()) != m.size() ||
        m.entries.rows() != m.entries.cols()) {
        throw DimensionError("matrix and label counts differ");
    }
    std::string out;
    for (const auto& l : m.labels) out += "," + csv_field(l);
    out += '\n';
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        out += csv_field(m.labels[i]);
        for (Eigen::Index j = 0; j < m.size(); ++j) out += "," + number4(m.entries(i, j));
        out += '\n';
    }
    return out;
}

DissimilarityMatrix parse_matrix_csv(const std::string& text, const std::string& source) {
    const auto rows = split_csv(text, source);
    if (rows.empty()) fail(source, 1, "empty matrix file");
    DissimilarityMatrix m;
    m.labels.assign(rows[0].fields.begin() + 1, rows[0].fields.end());
    const auto n = static_cast<Eigen::Index>(m.labels.size());
    require_unique(m.labels, source);
    if (static_cast<Eigen::Index>(rows.size()) != n + 1) {
        fail(source, rows.back().line,
             fmt::format("expected {} data rows, found {}", n, rows.size() - 1));
    }
    m.entries.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = rows[i + 1];
        if (static_cast<Eigen::Index>(row.fields.size()) != n + 1) {
            fail(source, row.line, fmt::format("expected {} fields", n + 1));
        }
        if (row.fields[0] != m.labels[i]) {
            fail(source, row.line,
                 fmt::format("row label '{}' does not match column '{}'", row.fields[0],
                             m.labels[i]));
        }
        for (Eigen::Index j = 0; j < n; ++j) {
            m.entries(i, j) = parse_number(row.fields[j + 1], source, row.line);
        }
    }
    return m;
}

std::string format_embedding_csv(const LabeledPoints& points) {
    if (static_cast<Eigen::Index>(points.labels.size()) != points.coords.rows()) {
        throw DimensionError("embedding and label counts differ");
    }
    std::string out = "label";
    for (Eigen::Index c = 0; c < points.coords.cols(); ++c) out += fmt::format(",x{}", c + 1);
    out += '\n';
    for (Eigen::Index i = 0; i < points.coords.rows(); ++i) {
        out += csv_field(points.labels[i]);
        for (Eigen::Index c = 0; c < points.coords.cols(); ++c) {
            out += fmt::format(",{:.17g}", points.coords(i, c));
        }
        out += '\n';
    }
    return out;
}

LabeledPoints parse_embedding_csv(const std::string& text, const std::string& source) {
    const auto rows = split_csv(text, source);
    if (rows.empty()) fail(source, 1, "empty embedding file");
    const auto dim = static_cast<Eigen::Index>(rows[0].fields.size()) - 1;
    if (dim < 1) fail(source, rows[0].line, "embedding needs at least one coordinate column");
    LabeledPoints p;
    p.coords.resize(static_cast<Eigen::Index>(rows.size()) - 1, dim);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (static_cast<Eigen::Index>(row.fields.size()) != dim + 1) {
            fail(source, row.line, fmt::format("expected {} fields", dim + 1));
        }
        p.labels.push_back(row.fields[0]);
        for (Eigen::Index c = 0; c < dim; ++c) {
            p.coords(static_cast<Eigen::Index>(r) - 1, c) =
                parse_number(row.fields[c + 1], source, row.line);
        }
    }
    require_unique(p.labels, source);
    return p;
}

analysis::ClusterAssignment AssignmentTable::to_assignment() const {
    const int k = cluster.empty() ? 0 : *std::max_element(cluster.begin(), cluster.end()) + 1;
    analysis::ClusterAssignment a;
    a.membership = analysis::membership_from_labels(cluster, k);
    a.centroid_index.resize(k);
    for (std::size_t i = 0; i < cluster.size(); ++i) {
        if (is_centroid[i]) a.centroid_index[cluster[i]] = static_cast<Eigen::Index>(i);
    }
    return a;
}

std::string format_assignment_csv(const std::vector<std::string>& labels,
                                  const analysis::ClusterAssignment& assignment) {
    if (static_cast<Eigen::Index>(labels.size()) != assignment.membership.cols()) {
        throw DimensionError("assignment and label counts differ");
    }
    const auto cluster = assignment.cluster_of();
    std::string out = "label,cluster,is_centroid\n";
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto& c = assignment.centroid_index[cluster[i]];
        const bool centroid = c && *c == static_cast<Eigen::Index>(i);
        out += fmt::format("{},{},{}\n", csv_field(labels[i]), cluster[i] + 1, centroid ? 1 : 0);
    }
    return out;
}

AssignmentTable parse_assignment_csv(const std::string& text, const std::string& source) {
    const auto rows = split_csv(text, source);
    if (rows.empty() || rows[0].fields != std::vector<std::string>{"label", "cluster", "is_centroid"}) {
        fail(source, 1, "expected header 'label,cluster,is_centroid'");
    }
    AssignmentTable t;
    std::set<int> centroid_clusters;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() != 3) fail(source, row.line, "expected 3 fields");
        const int c = parse_int(row.fields[1], source, row.line);
        const int flag = parse_int(row.fields[2], source, row.line);
        if (c < 1) fail(source, row.line, "cluster numbers start at 1");
        if (flag != 0 && flag != 1) fail(source, row.line, "is_centroid must be 0 or 1");
        if (flag == 1 && !centroid_clusters.insert(c).second) {
            fail(source, row.line, fmt::format("cluster {} has two centroids", c));
        }
        t.labels.push_back(row.fields[0]);
        t.cluster.push_back(c - 1);
        t.is_centroid.push_back(flag == 1);
    }
    require_unique(t.labels, source);
    return t;
}

std::string format_quality_report(const analysis::QualityReport& q) {
    return fmt::format(
        "norm_ratio_percent: {:.6f}\nresidual_ratio_percent: {:.6f}\npythagoras_defect: {:.3e}\n",
        q.norm_ratio, q.residual_ratio, q.pythagoras_defect);
}

}  // namespace shapesim::cli
