#include <algorithm>
#include <random>

#include "shapesim/error.hpp"
#include "shapesim/geometry.hpp"

namespace shapesim::geometry {

OverlapEstimate mc_overlap_oracle(const Shape& a, const Shape& b, std::int64_t samples,
                                  std::uint64_t seed) {
    if (samples < 10'000) throw Error("Monte Carlo overlap needs at least 1e4 samples");

    const BoundingBox ba = bounding_box(a);
    const BoundingBox bb = bounding_box(b);
    const BoundingBox box{std::min(ba.min_x, bb.min_x), std::min(ba.min_y, bb.min_y),
                          std::max(ba.max_x, bb.max_x), std::max(ba.max_y, bb.max_y)};
    const double box_area = box.width() * box.height();
    if (!(box_area > 0.0)) throw Error("Monte Carlo overlap: empty bounding box");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(box.min_x, box.max_x);
    std::uniform_real_distribution<double> uy(box.min_y, box.max_y);

    std::int64_t in_a = 0, in_b = 0, in_both = 0;
    for (std::int64_t i = 0; i < samples; ++i) {
        const Point p{ux(rng), uy(rng)};
        const bool sa = contains(a, p);
        const bool sb = contains(b, p);
        in_a += sa;
        in_b += sb;
        in_both += sa && sb;
    }

    const double n = static_cast<double>(samples);
    // Binomial standard error; the p(1-p) floor of 1/n keeps a zero count
    // from claiming zero uncertainty.
    auto se = [&](std::int64_t count) {
        const double p = static_cast<double>(count) / n;
        return box_area * std::sqrt(std::max(p * (1.0 - p), 1.0 / n) / n);
    };

    OverlapEstimate out;
    out.samples = samples;
    out.estimate.area_a = box_area * static_cast<double>(in_a) / n;
    out.estimate.area_b = box_area * static_cast<double>(in_b) / n;
    out.estimate.intersection = box_area * static_cast<double>(in_both) / n;
    out.estimate.delta_a = box_area * static_cast<double>(in_a - in_both) / n;
    out.estimate.delta_b = box_area * static_cast<double>(in_b - in_both) / n;
    out.area_a_se = se(in_a);
    out.area_b_se = se(in_b);
    out.intersection_se = se(in_both);
    out.delta_a_se = se(in_a - in_both);
    out.delta_b_se = se(in_b - in_both);
    return out;
}

}  // namespace shapesim::geometry
