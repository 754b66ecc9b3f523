#include "fwsn/geometry.hpp"

#include "fwsn/error.hpp"
#include "fwsn/kernels.hpp"
#include "fwsn/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fwsn::geometry {

double distance(Point u, Point v) noexcept { return std::hypot(u.x - v.x, u.y - v.y); }

double distance_squared(Point u, Point v) noexcept {
    const double dx = u.x - v.x;
    const double dy = u.y - v.y;
    return dx * dx + dy * dy;
}

bool inside_unit_square(Point p, double slack) noexcept {
    return std::abs(p.x) <= kHalfSide + slack && std::abs(p.y) <= kHalfSide + slack;
}

double clipped_disk_area(const Disk& d) {
    require(d.radius >= 0.0, "clipped_disk_area: radius must be nonnegative");
    double out = 0.0;
    kernels::scalar::clipped_disk_area({&d.center.x, 1}, {&d.center.y, 1}, d.radius, {&out, 1});
    return out;
}

double lens_area(double center_distance, double radius) noexcept {
    const double d = center_distance;
    const double r = radius;
    if (!(r > 0.0) || d >= 2.0 * r) return 0.0;
    return 2.0 * r * r * std::acos(d / (2.0 * r)) - 0.5 * d * std::sqrt(4.0 * r * r - d * d);
}

namespace {

struct Box {
    double x0, x1, y0, y1;

    bool empty() const { return !(x0 < x1 && y0 < y1); }
    double area() const { return empty() ? 0.0 : (x1 - x0) * (y1 - y0); }
};

// Axis-aligned box around the lens of two equal disks. The lens lies inside
// the disk whose diameter is the common chord, and inside both disks.
Box lens_box(const Disk& a, const Disk& b) {
    const double r = a.radius;
    const double d = distance(a.center, b.center);
    const double half_chord = std::sqrt(std::max(0.0, r * r - 0.25 * d * d));
    const Point mid{0.5 * (a.center.x + b.center.x), 0.5 * (a.center.y + b.center.y)};
    Box box{mid.x - half_chord, mid.x + half_chord, mid.y - half_chord, mid.y + half_chord};
    for (const Disk* disk : {&a, &b}) {
        box.x0 = std::max(box.x0, disk->center.x - r);
        box.x1 = std::min(box.x1, disk->center.x + r);
        box.y0 = std::max(box.y0, disk->center.y - r);
        box.y1 = std::min(box.y1, disk->center.y + r);
    }
    return box;
}

}  // namespace

bool lens_inside_unit_square(const Disk& a, const Disk& b) noexcept {
    const Box box = lens_box(a, b);
    return box.x0 >= -kHalfSide && box.x1 <= kHalfSide && box.y0 >= -kHalfSide && box.y1 <= kHalfSide;
}

AreaEstimate clipped_lens_area(const Disk& a, const Disk& b, std::uint64_t samples,
                               std::uint64_t seed) {
    require(samples > 0, "clipped_lens_area: samples must be positive");
    require(std::abs(a.radius - b.radius) <= kGeomEps, "clipped_lens_area: radii must be equal");
    require(a.radius >= 0.0, "clipped_lens_area: radius must be nonnegative");
    const double r = a.radius;
    if (!(r > 0.0) || distance(a.center, b.center) > 2.0 * r) return {};

    Box box = lens_box(a, b);
    box.x0 = std::max(box.x0, -kHalfSide);
    box.x1 = std::min(box.x1, kHalfSide);
    box.y0 = std::max(box.y0, -kHalfSide);
    box.y1 = std::min(box.y1, kHalfSide);
    if (box.empty()) return {};

    const double r2 = r * r;
    SplitMix64 rng(seed);
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < samples; ++i) {
        const Point z{box.x0 + (box.x1 - box.x0) * rng.uniform(), box.y0 + (box.y1 - box.y0) * rng.uniform()};
        if (distance_squared(z, a.center) <= r2 && distance_squared(z, b.center) <= r2) ++hits;
    }
    const double n = static_cast<double>(samples);
    const double f = static_cast<double>(hits) / n;
    const double box_area = box.area();
    return {box_area * f, box_area * std::sqrt(f * (1.0 - f) / n)};
}

CircleIntersection circle_pair_intersections(const Disk& a, const Disk& b) {
    require(a.radius > 0.0 && b.radius > 0.0, "circle_pair_intersections: radii must be positive");
    const double ra = a.radius;
    const double rb = b.radius;
    const double dx = b.center.x - a.center.x;
    const double dy = b.center.y - a.center.y;
    const double d = std::hypot(dx, dy);

    if (d <= kGeomEps) {
        if (std::abs(ra - rb) <= kGeomEps) return {IntersectionKind::coincident, {}};
        return {};
    }
    if (d > ra + rb + kGeomEps || d < std::abs(ra - rb) - kGeomEps) return {};

    const double along = (d * d + ra * ra - rb * rb) / (2.0 * d);
    const double ux = dx / d;
    const double uy = dy / d;
    const Point foot{a.center.x + along * ux, a.center.y + along * uy};
    const bool tangent = std::abs(d - (ra + rb)) <= kGeomEps || std::abs(d - std::abs(ra - rb)) <= kGeomEps;
    const double h2 = ra * ra - along * along;
    if (tangent || h2 <= 0.0) return {IntersectionKind::one, {foot}};

    const double h = std::sqrt(h2);
    return {IntersectionKind::two,
            {Point{foot.x - h * uy, foot.y + h * ux}, Point{foot.x + h * uy, foot.y - h * ux}}};
}

std::vector<Point> circle_square_intersections(const Disk& d) {
    require(d.radius > 0.0, "circle_square_intersections: radius must be positive");
    const double r = d.radius;
    std::vector<Point> out;
    auto add = [&](Point p) {
        if (!inside_unit_square(p, kGeomEps)) return;
        for (const Point& q : out) {
            if (distance_squared(p, q) <= kGeomEps * kGeomEps) return;
        }
        out.push_back(p);
    };
    // Vertical edges x = +-0.5, then horizontal edges y = +-0.5.
    for (const double edge : {-kHalfSide, kHalfSide}) {
        const double off = edge - d.center.x;
        if (std::abs(off) > r + kGeomEps) continue;
        if (r - std::abs(off) <= kGeomEps) {
            add({edge, d.center.y});
            continue;
        }
        const double h = std::sqrt(r * r - off * off);
        add({edge, d.center.y - h});
        add({edge, d.center.y + h});
    }
    for (const double edge : {-kHalfSide, kHalfSide}) {
        const double off = edge - d.center.y;
        if (std::abs(off) > r + kGeomEps) continue;
        if (r - std::abs(off) <= kGeomEps) {
            add({d.center.x, edge});
            continue;
        }
        const double h = std::sqrt(r * r - off * off);
        add({d.center.x - h, edge});
        add({d.center.x + h, edge});
    }
    return out;
}

}  // namespace fwsn::geometry
