#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "shapesim/analysis/cluster.hpp"

namespace shapesim::cli {

struct MapAnchors {
    std::vector<std::string> labels;
    Eigen::MatrixXd coords;  // k x 2, already in the map frame
};

/// Labeled scatter of a 2D embedding. With an assignment, points are filled
/// per cluster and centroids get a ring marker. Throws DimensionError for an
/// empty or non-2D embedding or mismatched labels.
std::string render_map_svg(const Eigen::MatrixXd& coords, const std::vector<std::string>& labels,
                           const std::optional<analysis::ClusterAssignment>& assignment = {},
                           const std::optional<MapAnchors>& anchors = {});

/// Upper-triangle entries ranked by ascending D: blue D, red d at the same rank.
std::string render_rank_plot_svg(const Eigen::MatrixXd& D, const Eigen::MatrixXd& d);

/// Points (D_ij, d_ij) with the identity line.
std::string render_scatter_svg(const Eigen::MatrixXd& D, const Eigen::MatrixXd& d);

std::string xml_escape(const std::string& s);

}  // namespace shapesim::cli
