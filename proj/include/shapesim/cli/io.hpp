#pragma once

// File formats used by the command-line tool.
//
// Shape file (JSON, one shape per file):
//   {"name": "A", "rings": [[[x, y], [x, y], ...], ...]}
// Matrix CSV: header ",label1,label2,..."; each row "label,v1,v2,..." with
// 4 fractional digits. Embedding CSV: "label,x1,...,xn" at 17 significant
// digits. Assignment CSV: "label,cluster,is_centroid", clusters numbered
// from 1.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "shapesim/analysis/cluster.hpp"
#include "shapesim/analysis/metrics.hpp"
#include "shapesim/geometry.hpp"
#include "shapesim/matrix.hpp"

namespace shapesim::cli {

namespace fs = std::filesystem;

/// Parses one shape document. `source` names the input in error messages.
/// Throws ParseError (with line for syntax errors), InvalidRingError or
/// DegenerateShapeError.
geometry::Shape parse_shape(const std::string& text, const std::string& source);

geometry::Shape load_shape_file(const fs::path& path);

/// Loads every path; a directory contributes its *.json files in name
/// order. Throws DuplicateNameError if two shapes share a name.
std::vector<geometry::Shape> load_shapes(const std::vector<fs::path>& paths);

std::string read_text_file(const fs::path& path);
void write_text_file(const fs::path& path, const std::string& text);

std::string format_matrix_csv(const DissimilarityMatrix& m);
DissimilarityMatrix parse_matrix_csv(const std::string& text, const std::string& source);

struct LabeledPoints {
    std::vector<std::string> labels;
    Eigen::MatrixXd coords;  // one row per label
};

std::string format_embedding_csv(const LabeledPoints& points);
LabeledPoints parse_embedding_csv(const std::string& text, const std::string& source);

struct AssignmentTable {
    std::vector<std::string> labels;
    std::vector<int> cluster;  // 0-based in memory
    std::vector<bool> is_centroid;

    /// Rebuilds a ClusterAssignment with K = largest cluster + 1.
    analysis::ClusterAssignment to_assignment() const;
};

std::string format_assignment_csv(const std::vector<std::string>& labels,
                                  const analysis::ClusterAssignment& assignment);
AssignmentTable parse_assignment_csv(const std::string& text, const std::string& source);

std::string format_quality_report(const analysis::QualityReport& q);

}  // namespace shapesim::cli
