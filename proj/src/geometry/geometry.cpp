#include "shapesim/geometry.hpp"

#include <algorithm>
#include <limits>

#include "shapesim/error.hpp"
#include "sweep.hpp"

namespace shapesim::geometry {

namespace {

double diagonal(const std::vector<Point>& v) {
    double min_x = v[0].x, max_x = v[0].x, min_y = v[0].y, max_y = v[0].y;
    for (const Point& p : v) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    return std::hypot(max_x - min_x, max_y - min_y);
}

}  // namespace

Ring::Ring(std::vector<Point> vertices) {
    if (vertices.size() < 3) {
        throw InvalidRingError("ring needs at least 3 vertices, got " +
                               std::to_string(vertices.size()));
    }
    for (const Point& p : vertices) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
            throw InvalidRingError("ring has a non-finite coordinate");
        }
    }
    const double tol = kSnapTolerance * diagonal(vertices);
    auto same = [tol](Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y) <= tol; };

    vertices_.reserve(vertices.size());
    for (const Point& p : vertices) {
        if (vertices_.empty() || !same(vertices_.back(), p)) vertices_.push_back(p);
    }
    while (vertices_.size() > 1 && same(vertices_.back(), vertices_.front())) {
        vertices_.pop_back();
    }
    if (vertices_.size() < 3) {
        throw InvalidRingError("ring has fewer than 3 distinct vertices");
    }
}

Ring Ring::reversed() const {
    std::vector<Point> v(vertices_.rbegin(), vertices_.rend());
    return Ring(std::move(v), Unchecked{});
}

Shape::Shape(std::string name, std::vector<Ring> rings)
    : name_(std::move(name)), rings_(std::move(rings)) {
    if (rings_.empty()) throw DegenerateShapeError("shape '" + name_ + "' has no rings");
    const double area = shape_area(*this);
    if (!(area > 0.0)) {
        throw DegenerateShapeError("shape '" + name_ + "' has non-positive filled area");
    }
}

std::size_t Shape::vertex_count() const noexcept {
    std::size_t n = 0;
    for (const Ring& r : rings_) n += r.size();
    return n;
}

Point SimilarityTransform::apply(Point p) const noexcept {
    const double s = scale();
    const double c = std::cos(angle);
    const double sn = std::sin(angle);
    return {s * (c * p.x - sn * p.y) + tx, s * (sn * p.x + c * p.y) + ty};
}

double signed_area(std::span<const Point> v) {
    if (v.size() < 3) throw InvalidRingError("ring needs at least 3 vertices");
    // Shoelace relative to the first vertex keeps cancellation small.
    const Point o = v[0];
    double twice = 0.0;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        twice += (v[i].x - o.x) * (v[i + 1].y - o.y) - (v[i + 1].x - o.x) * (v[i].y - o.y);
    }
    return 0.5 * twice;
}

double ring_area(const Ring& ring) { return signed_area(ring.vertices()); }

double shape_area(const Shape& shape) {
    std::vector<detail::SweepEdge> edges;
    detail::append_edges(shape, 0, edges);
    return detail::sweep(std::move(edges), false).area[0];
}

Point shape_centroid(const Shape& shape) {
    std::vector<detail::SweepEdge> edges;
    detail::append_edges(shape, 0, edges);
    const auto t = detail::sweep(std::move(edges), true);
    if (!(t.area[0] > 0.0)) throw DegenerateShapeError("centroid of an empty region");
    return {t.moment_x / t.area[0], t.moment_y / t.area[0]};
}

Shape apply_transform(const Shape& shape, const SimilarityTransform& t) {
    const double s = t.scale();
    const double c = std::cos(t.angle);
    const double sn = std::sin(t.angle);
    std::vector<Ring> rings;
    rings.reserve(shape.rings().size());
    for (const Ring& ring : shape.rings()) {
        std::vector<Point> v;
        v.reserve(ring.size());
        for (const Point& p : ring.vertices()) {
            v.push_back({s * (c * p.x - sn * p.y) + t.tx, s * (sn * p.x + c * p.y) + t.ty});
        }
        rings.push_back(Ring(std::move(v), Ring::Unchecked{}));
    }
    return Shape(shape.name(), std::move(rings), Shape::Unchecked{});
}

OverlapResult overlap(const Shape& a, const Shape& b) {
    std::vector<detail::SweepEdge> edges;
    edges.reserve(a.vertex_count() + b.vertex_count());
    detail::append_edges(a, 0, edges);
    detail::append_edges(b, 1, edges);
    const auto t = detail::sweep(std::move(edges), false);

    OverlapResult r;
    r.area_a = t.area[0];
    r.area_b = t.area[1];
    r.intersection = t.both;
    r.delta_a = r.area_a - r.intersection;
    r.delta_b = r.area_b - r.intersection;

    const double tol = 1e-9 * (r.area_a + r.area_b);
    if (!std::isfinite(r.intersection) || r.intersection < -tol || r.delta_a < -tol ||
        r.delta_b < -tol) {
        throw GeometryRobustnessError("overlap of '" + a.name() + "' and '" + b.name() +
                                      "' produced negative area");
    }
    r.intersection = std::max(r.intersection, 0.0);
    r.delta_a = std::max(r.delta_a, 0.0);
    r.delta_b = std::max(r.delta_b, 0.0);
    return r;
}

bool contains(const Shape& shape, Point p) {
    bool inside = false;
    for (const Ring& ring : shape.rings()) {
        const auto& v = ring.vertices();
        for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
            if ((v[i].y > p.y) != (v[j].y > p.y)) {
                const double x = v[j].x + (p.y - v[j].y) * (v[i].x - v[j].x) / (v[i].y - v[j].y);
                if (p.x < x) inside = !inside;
            }
        }
    }
    return inside;
}

BoundingBox bounding_box(const Shape& shape) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    BoundingBox box{inf, inf, -inf, -inf};
    for (const Ring& ring : shape.rings()) {
        for (const Point& p : ring.vertices()) {
            box.min_x = std::min(box.min_x, p.x);
            box.min_y = std::min(box.min_y, p.y);
            box.max_x = std::max(box.max_x, p.x);
            box.max_y = std::max(box.max_y, p.y);
        }
    }
    return box;
}

}  // namespace shapesim::geometry
