#include "fwsn/coverage.hpp"

#include "fwsn/error.hpp"
#include "fwsn/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace fwsn::coverage {
namespace {

constexpr double kDirEps = 1e-9;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

class Checker {
public:
    Checker(std::span<const Point> sensors, double r, unsigned k) : r_(r), k_(k) {
        xs_.reserve(sensors.size());
        ys_.reserve(sensors.size());
        for (const Point& s : sensors) {
            xs_.push_back(s.x);
            ys_.push_back(s.y);
        }
        inner2_ = (r - kGeomEps) * (r - kGeomEps);
        outer2_ = (r + kGeomEps) * (r + kGeomEps);
    }

    std::span<const double> xs() const { return xs_; }
    std::span<const double> ys() const { return ys_; }

    // Coverage count in the worst admissible direction away from c is >= k.
    bool covered_near(Point c) {
        boundary_.clear();
        const std::uint32_t strict = kernels::classify_membership(xs_, ys_, c.x, c.y, inner2_, outer2_, k_, boundary_);
        if (strict >= k_) return true;
        if (strict + boundary_.size() < k_) return false;
        return worst_direction_count(c) + strict >= k_;
    }

    // Sufficient test: every cell-centered lattice point with spacing h has k
    // sensors within r - h/sqrt(2).
    bool lattice_certificate() const {
        const double m = std::ceil(2.0 * std::numbers::sqrt2 / r_);
        if (m > 64.0) return false;
        const double reach = r_ - 1.0 / (m * std::numbers::sqrt2) - kGeomEps;
        if (reach <= 0.0) return false;
        const double r2 = reach * reach;
        const int side = static_cast<int>(m);
        for (int j = 0; j < side; ++j) {
            const double y = (j + 0.5) / m - 0.5;
            for (int i = 0; i < side; ++i) {
                if (kernels::count_within(xs_, ys_, (i + 0.5) / m - 0.5, y, r2) < k_) return false;
            }
        }
        return true;
    }

private:
    std::size_t worst_direction_count(Point c) {
        normals_.clear();
        if (std::abs(c.x - kHalfSide) <= kGeomEps) normals_.push_back({-1.0, 0.0});
        if (std::abs(c.x + kHalfSide) <= kGeomEps) normals_.push_back({1.0, 0.0});
        if (std::abs(c.y - kHalfSide) <= kGeomEps) normals_.push_back({0.0, -1.0});
        if (std::abs(c.y + kHalfSide) <= kGeomEps) normals_.push_back({0.0, 1.0});

        // Counts only change where a direction crosses a sensor's tangent
        // line or an edge, so test those angles and the arcs between them.
        angles_.clear();
        auto add_perpendiculars = [&](double phi) {
            for (double a : {phi + 0.5 * std::numbers::pi, phi - 0.5 * std::numbers::pi}) {
                a = std::fmod(a, kTwoPi);
                angles_.push_back(a < 0.0 ? a + kTwoPi : a);
            }
        };
        for (std::uint32_t s : boundary_) add_perpendiculars(std::atan2(ys_[s] - c.y, xs_[s] - c.x));
        for (const Point& n : normals_) add_perpendiculars(std::atan2(n.y, n.x));
        std::sort(angles_.begin(), angles_.end());

        const std::size_t critical = angles_.size();
        for (std::size_t i = 0; i < critical; ++i) {
            const double next = i + 1 < critical ? angles_[i + 1] : angles_[0] + kTwoPi;
            angles_.push_back(0.5 * (angles_[i] + next));
        }

        std::size_t worst = boundary_.size();
        for (double theta : angles_) {
            const double ux = std::cos(theta), uy = std::sin(theta);
            bool admissible = true;
            for (const Point& n : normals_) admissible = admissible && (ux * n.x + uy * n.y >= -kDirEps);
            if (!admissible) continue;
            std::size_t count = 0;
            for (std::uint32_t s : boundary_) {
                const double dx = xs_[s] - c.x, dy = ys_[s] - c.y;
                if (ux * dx + uy * dy > kDirEps * std::hypot(dx, dy)) ++count;
            }
            worst = std::min(worst, count);
            if (worst == 0) break;
        }
        return worst;
    }

    double r_;
    unsigned k_;
    double inner2_ = 0.0, outer2_ = 0.0;
    std::vector<double> xs_, ys_;
    std::vector<std::uint32_t> boundary_;
    std::vector<Point> normals_;
    std::vector<double> angles_;
};

}  // namespace

bool is_k_covered(std::span<const Point> sensors, double r, unsigned k) {
    require(r > 0.0, "is_k_covered: radius must be positive");
    require(k >= 1, "is_k_covered: k must be >= 1");
    if (sensors.size() < k) return false;

    Checker check(sensors, r, k);
    for (const Point corner : {Point{-0.5, -0.5}, Point{0.5, -0.5}, Point{-0.5, 0.5}, Point{0.5, 0.5}}) {
        if (!check.covered_near(corner)) return false;
    }
    if (check.lattice_certificate()) return true;

    for (const Point& s : sensors) {
        for (const Point& c : geometry::circle_square_intersections({s, r})) {
            if (!check.covered_near(c)) return false;
        }
    }
    const double reach2 = (2.0 * r + kGeomEps) * (2.0 * r + kGeomEps);
    for (std::size_t i = 0; i < sensors.size(); ++i) {
        for (std::size_t j = i + 1; j < sensors.size(); ++j) {
            if (geometry::distance_squared(sensors[i], sensors[j]) > reach2) continue;
            const CircleIntersection hit = geometry::circle_pair_intersections({sensors[i], r}, {sensors[j], r});
            for (const Point& c : hit.points) {
                if (geometry::inside_unit_square(c, kGeomEps) && !check.covered_near(c)) return false;
            }
        }
    }
    return true;
}

}  // namespace fwsn::coverage
