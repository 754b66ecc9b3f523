#include "fwsn/kernels.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>

namespace fwsn::kernels::scalar {
namespace {

constexpr double kPi = std::numbers::pi;

// Half-chord sqrt(r^2 - u^2), factored to keep accuracy near |u| = r.
double half_chord(double u, double r) { return std::sqrt(std::max(0.0, (r - u) * (r + u))); }

// Area of B(0, r) & {u >= h}, valid for any real h. Angles come from atan2 of
// the chord endpoints, which stays well conditioned where acos(h / r) is not.
double segment(double h, double r) {
    if (h >= r) return 0.0;
    if (h <= -r) return kPi * r * r;
    const double w = half_chord(h, r);
    return r * r * std::atan2(w, h) - h * w;
}

// Antiderivative of sqrt(r^2 - u^2), given w = sqrt(r^2 - u^2).
double chord_integral(double u, double w, double r) { return 0.5 * (u * w + r * r * std::atan2(u, w)); }

// Area of B(0, r) & {u >= a, v >= b} for a, b >= 0.
double quadrant_nonneg(double a, double b, double r) {
    if (a * a + b * b >= r * r) return 0.0;
    const double x1 = half_chord(b, r);
    return chord_integral(x1, b, r) - chord_integral(a, half_chord(a, r), r) - b * (x1 - a);
}

// Area of B(0, r) & {u >= a, v >= b} for any signs, by reflection.
double quadrant(double a, double b, double r) {
    if (a >= 0.0 && b >= 0.0) return quadrant_nonneg(a, b, r);
    if (a < 0.0 && b >= 0.0) return segment(b, r) - quadrant_nonneg(-a, b, r);
    if (a >= 0.0 && b < 0.0) return segment(a, r) - quadrant_nonneg(a, -b, r);
    return segment(b, r) - segment(-a, r) + quadrant_nonneg(-a, -b, r);
}

double clipped_area(double cx, double cy, double r) {
    if (!(r > 0.0)) return 0.0;
    // The disk holds the whole square once it reaches the farthest corner.
    const double fx = 0.5 + std::abs(cx);
    const double fy = 0.5 + std::abs(cy);
    if (fx * fx + fy * fy <= r * r) return 1.0;
    // and misses it once the nearest point of the square is out of reach.
    const double gx = std::max(std::abs(cx) - 0.5, 0.0);
    const double gy = std::max(std::abs(cy) - 0.5, 0.0);
    if (gx * gx + gy * gy >= r * r) return 0.0;
    // Signed distances from the center to the four edge lines, measured
    // towards the outside of the square.
    const double right = 0.5 - cx;
    const double left = 0.5 + cx;
    const double top = 0.5 - cy;
    const double bottom = 0.5 + cy;
    const double full = kPi * r * r;
    double area = full - segment(right, r) - segment(left, r) - segment(top, r) -
                  segment(bottom, r) + quadrant(right, top, r) + quadrant(right, bottom, r) +
                  quadrant(left, top, r) + quadrant(left, bottom, r);
    return std::clamp(area, 0.0, std::min(full, 1.0));
}

}  // namespace

void clipped_disk_area(std::span<const double> xs, std::span<const double> ys, double r,
                       std::span<double> out) {
    assert(xs.size() == ys.size() && out.size() >= xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = clipped_area(xs[i], ys[i], r);
}

std::size_t count_within(std::span<const double> xs, std::span<const double> ys, double qx,
                         double qy, double r2) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - qx;
        const double dy = ys[i] - qy;
        count += (dx * dx + dy * dy <= r2) ? 1 : 0;
    }
    return count;
}

std::uint32_t classify_membership(std::span<const double> xs, std::span<const double> ys,
                                  double qx, double qy, double inner2, double outer2,
                                  std::uint32_t stop_at, std::vector<std::uint32_t>& boundary) {
    std::uint32_t strict = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - qx;
        const double dy = ys[i] - qy;
        const double d2 = dx * dx + dy * dy;
        if (d2 < inner2) {
            if (++strict >= stop_at) return stop_at;
        } else if (d2 <= outer2) {
            boundary.push_back(static_cast<std::uint32_t>(i));
        }
    }
    return strict;
}

void collect_within(std::span<const double> xs, std::span<const double> ys, double qx,
                    double qy, double r2, std::uint32_t index_offset,
                    std::vector<std::uint32_t>& out) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - qx;
        const double dy = ys[i] - qy;
        if (dx * dx + dy * dy <= r2) out.push_back(index_offset + static_cast<std::uint32_t>(i));
    }
}

}  // namespace fwsn::kernels::scalar
