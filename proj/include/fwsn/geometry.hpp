#pragma once

// Planar geometry on the closed unit square S0 = [-0.5, 0.5]^2.

#include <cstdint>
#include <numbers>
#include <vector>

namespace fwsn {

// Slack used to classify tangency and on-boundary cases.
inline constexpr double kGeomEps = 1e-12;
inline constexpr double kHalfSide = 0.5;

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

struct Disk {
    Point center;
    double radius = 0.0;
};

struct AreaEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

enum class IntersectionKind : std::uint8_t { none, one, two, coincident };

struct CircleIntersection {
    IntersectionKind kind = IntersectionKind::none;
    std::vector<Point> points;
};

namespace geometry {

double distance(Point u, Point v) noexcept;
double distance_squared(Point u, Point v) noexcept;

bool inside_unit_square(Point p, double slack = 0.0) noexcept;

// Area of B(center, r) intersected with S0, in closed form.
double clipped_disk_area(const Disk& d);

// Area of two equal-radius disks' intersection, without clipping.
double lens_area(double center_distance, double radius) noexcept;

// Monte Carlo estimate of area(B(a) & B(b) & S0), sampled over the lens'
// bounding box clipped to S0. Disjoint disks short-circuit to exactly 0.
AreaEstimate clipped_lens_area(const Disk& a, const Disk& b, std::uint64_t samples,
                               std::uint64_t seed);

// True when the lens of two equal disks lies entirely inside S0.
bool lens_inside_unit_square(const Disk& a, const Disk& b) noexcept;

CircleIntersection circle_pair_intersections(const Disk& a, const Disk& b);

// Points where the circle boundary meets the boundary of S0, deduplicated.
std::vector<Point> circle_square_intersections(const Disk& d);

}  // namespace geometry
}  // namespace fwsn
