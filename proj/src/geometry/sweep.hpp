#pragma once

// Vertical-slab decomposition of up to two even-odd regions.
//
// Every vertex abscissa and every edge-edge crossing abscissa becomes a slab
// boundary. Inside a slab no two edges cross, so the edges can be ordered by
// their height at the slab midpoint and the region between consecutive edges
// is a trapezoid. Walking upward and toggling one parity bit per owner gives
// the even-odd membership of each trapezoid. No output polygon is ever
// reconstructed, so there is no topology that rounding could corrupt: a
// crossing missed by rounding costs at most a sliver of area.

#include <vector>

#include "shapesim/geometry.hpp"

namespace shapesim::geometry::detail {

struct SweepEdge {
    double x0, y0, x1, y1;  // x0 < x1
    unsigned owner;         // 0 or 1
};

struct SweepTotals {
    double area[2] = {0.0, 0.0};
    double both = 0.0;
    // First moments of owner 0's region (only filled on request).
    double moment_x = 0.0;
    double moment_y = 0.0;
};

void append_edges(const Shape& shape, unsigned owner, std::vector<SweepEdge>& out);

SweepTotals sweep(std::vector<SweepEdge> edges, bool with_moments);

}  // namespace shapesim::geometry::detail
