#include "sweep.hpp"

#include <algorithm>
#include <cstddef>

namespace shapesim::geometry::detail {

namespace {

inline double height_at(const SweepEdge& e, double x) {
    return e.y0 + (e.y1 - e.y0) * ((x - e.x0) / (e.x1 - e.x0));
}

// Abscissae where two non-vertical edges properly cross.
void collect_crossings(const std::vector<SweepEdge>& edges, std::vector<double>& xs) {
    const std::size_t n = edges.size();
    for (std::size_t i = 0; i < n; ++i) {
        const SweepEdge& p = edges[i];
        const double p_ymin = std::min(p.y0, p.y1);
        const double p_ymax = std::max(p.y0, p.y1);
        const double rx = p.x1 - p.x0;
        const double ry = p.y1 - p.y0;
        for (std::size_t j = i + 1; j < n && edges[j].x0 < p.x1; ++j) {
            const SweepEdge& q = edges[j];
            if (std::max(q.y0, q.y1) < p_ymin || std::min(q.y0, q.y1) > p_ymax) continue;
            const double sx = q.x1 - q.x0;
            const double sy = q.y1 - q.y0;
            const double denom = rx * sy - ry * sx;
            if (denom == 0.0) continue;
            const double qpx = q.x0 - p.x0;
            const double qpy = q.y0 - p.y0;
            const double t = (qpx * sy - qpy * sx) / denom;
            const double u = (qpx * ry - qpy * rx) / denom;
            if (t > 0.0 && t < 1.0 && u > 0.0 && u < 1.0) xs.push_back(p.x0 + t * rx);
        }
    }
}

struct Crossing {
    double mid, left, right;
    unsigned owner;
};

}  // namespace

void append_edges(const Shape& shape, unsigned owner, std::vector<SweepEdge>& out) {
    for (const Ring& ring : shape.rings()) {
        const auto& v = ring.vertices();
        for (std::size_t i = 0; i < v.size(); ++i) {
            Point a = v[i];
            Point b = v[(i + 1) % v.size()];
            if (a.x == b.x) continue;  // vertical edges bound no slab interior
            if (a.x > b.x) std::swap(a, b);
            out.push_back({a.x, a.y, b.x, b.y, owner});
        }
    }
}

SweepTotals sweep(std::vector<SweepEdge> edges, bool with_moments) {
    SweepTotals totals;
    if (edges.empty()) return totals;

    std::sort(edges.begin(), edges.end(),
              [](const SweepEdge& a, const SweepEdge& b) { return a.x0 < b.x0; });

    std::vector<double> xs;
    xs.reserve(edges.size() * 2);
    for (const auto& e : edges) {
        xs.push_back(e.x0);
        xs.push_back(e.x1);
    }
    collect_crossings(edges, xs);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    std::vector<std::size_t> active;
    std::vector<Crossing> column;
    std::size_t next = 0;

    for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
        const double xl = xs[k];
        const double xr = xs[k + 1];
        const double w = xr - xl;

        std::erase_if(active, [&](std::size_t e) { return edges[e].x1 <= xl; });
        while (next < edges.size() && edges[next].x0 <= xl) {
            if (edges[next].x1 > xl) active.push_back(next);
            ++next;
        }
        if (active.size() < 2) continue;

        const double xm = 0.5 * (xl + xr);
        column.clear();
        for (std::size_t e : active) {
            const SweepEdge& edge = edges[e];
            Crossing c{height_at(edge, xm), 0.0, 0.0, edge.owner};
            if (with_moments) {
                c.left = height_at(edge, xl);
                c.right = height_at(edge, xr);
            }
            column.push_back(c);
        }
        std::sort(column.begin(), column.end(),
                  [](const Crossing& a, const Crossing& b) { return a.mid < b.mid; });

        double slab_a = 0.0, slab_b = 0.0, slab_both = 0.0;
        unsigned parity = 0;
        for (std::size_t i = 0; i + 1 < column.size(); ++i) {
            parity ^= 1u << column[i].owner;
            if (parity == 0) continue;
            const double h = column[i + 1].mid - column[i].mid;
            if (parity & 1u) slab_a += h;
            if (parity & 2u) slab_b += h;
            if (parity == 3u) slab_both += h;

            if (with_moments && (parity & 1u)) {
                // Integrands are polynomial of degree <= 2 in x: Simpson is exact.
                const Crossing& lo = column[i];
                const Crossing& hi = column[i + 1];
                const double hl = hi.left - lo.left;
                const double hr = hi.right - lo.right;
                totals.moment_x += w / 6.0 * (xl * hl + 4.0 * xm * h + xr * hr);
                const double gl = 0.5 * (hi.left * hi.left - lo.left * lo.left);
                const double gm = 0.5 * (hi.mid * hi.mid - lo.mid * lo.mid);
                const double gr = 0.5 * (hi.right * hi.right - lo.right * lo.right);
                totals.moment_y += w / 6.0 * (gl + 4.0 * gm + gr);
            }
        }
        totals.area[0] += w * slab_a;
        totals.area[1] += w * slab_b;
        totals.both += w * slab_both;
    }
    return totals;
}

}  // namespace shapesim::geometry::detail
