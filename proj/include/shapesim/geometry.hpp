#pragma once

// Polygonal shapes under the even-odd fill rule, similarity transforms,
// and exact areas of shapes and of their pairwise overlaps.

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace shapesim::geometry {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

/// Consecutive vertices closer than this fraction of the ring's bounding-box
/// diagonal are merged.
inline constexpr double kSnapTolerance = 1e-9;

struct SimilarityTransform;
class Shape;
Shape apply_transform(const Shape& shape, const SimilarityTransform& t);

/// Closed polygonal ring. The last vertex connects back to the first.
class Ring {
public:
    /// Drops consecutive duplicates (including a repeated closing vertex).
    /// Throws InvalidRingError if fewer than 3 vertices remain.
    explicit Ring(std::vector<Point> vertices);

    const std::vector<Point>& vertices() const noexcept { return vertices_; }
    std::size_t size() const noexcept { return vertices_.size(); }

    Ring reversed() const;

private:
    struct Unchecked {};
    Ring(std::vector<Point> vertices, Unchecked) : vertices_(std::move(vertices)) {}
    friend Shape apply_transform(const Shape&, const SimilarityTransform&);

    std::vector<Point> vertices_;
};

/// Named set of rings filled with the even-odd rule, so holes and islands
/// are just additional rings. Self-intersecting rings are allowed.
class Shape {
public:
    /// Throws DegenerateShapeError when there are no rings or the filled
    /// area is not strictly positive.
    Shape(std::string name, std::vector<Ring> rings);

    const std::string& name() const noexcept { return name_; }
    const std::vector<Ring>& rings() const noexcept { return rings_; }

    std::size_t vertex_count() const noexcept;

private:
    struct Unchecked {};
    Shape(std::string name, std::vector<Ring> rings, Unchecked)
        : name_(std::move(name)), rings_(std::move(rings)) {}
    friend Shape apply_transform(const Shape&, const SimilarityTransform&);

    std::string name_;
    std::vector<Ring> rings_;
};

/// p -> exp(log_scale) * R(angle) * p + (tx, ty). No reflection.
struct SimilarityTransform {
    double log_scale = 0.0;
    double angle = 0.0;
    double tx = 0.0;
    double ty = 0.0;

    double scale() const noexcept { return std::exp(log_scale); }
    Point apply(Point p) const noexcept;
};

struct OverlapResult {
    double area_a = 0.0;
    double area_b = 0.0;
    double intersection = 0.0;
    double delta_a = 0.0;  // area_a - intersection
    double delta_b = 0.0;  // area_b - intersection
};

struct OverlapEstimate {
    OverlapResult estimate;
    double area_a_se = 0.0;
    double area_b_se = 0.0;
    double intersection_se = 0.0;
    double delta_a_se = 0.0;
    double delta_b_se = 0.0;
    std::int64_t samples = 0;
};

/// Signed shoelace area, counterclockwise positive.
/// Throws InvalidRingError for fewer than 3 vertices.
double signed_area(std::span<const Point> vertices);
double ring_area(const Ring& ring);

/// Even-odd filled area of all rings together.
double shape_area(const Shape& shape);

/// Area centroid of the even-odd filled region.
Point shape_centroid(const Shape& shape);

Shape apply_transform(const Shape& shape, const SimilarityTransform& t);

/// Exact intersection and difference areas of two even-odd regions.
/// Deterministic and symmetric in its arguments (up to field naming).
OverlapResult overlap(const Shape& a, const Shape& b);

/// Monte Carlo estimate of overlap() from uniform samples over the joint
/// bounding box, with binomial standard errors. Independent of the sweep
/// used by overlap(); intended as a test oracle.
OverlapEstimate mc_overlap_oracle(const Shape& a, const Shape& b, std::int64_t samples,
                                  std::uint64_t seed);

/// Even-odd point membership by ray crossing.
bool contains(const Shape& shape, Point p);

struct BoundingBox {
    double min_x, min_y, max_x, max_y;
    double width() const noexcept { return max_x - min_x; }
    double height() const noexcept { return max_y - min_y; }
};

BoundingBox bounding_box(const Shape& shape);

}  // namespace shapesim::geometry
