#include "fwsn/geometry.hpp"
#include "fwsn/error.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace fwsn;
using namespace fwsn::geometry;
using std::numbers::pi;

namespace {

// Rejection sampling over the disk's bounding box; returns (estimate, sigma)
// with sigma from the true hit probability implied by `exact`.
std::pair<double, double> rejection_area(const Disk& d, int samples, std::mt19937_64& gen, double exact) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double r = d.radius;
    int hits = 0;
    for (int i = 0; i < samples; ++i) {
        const double x = d.center.x + r * u(gen), y = d.center.y + r * u(gen);
        const double dx = x - d.center.x, dy = y - d.center.y;
        if (dx * dx + dy * dy <= r * r && std::abs(x) <= 0.5 && std::abs(y) <= 0.5) ++hits;
    }
    const double box = 4.0 * r * r;
    const double f = std::clamp(exact / box, 0.0, 1.0);
    return {box * hits / samples, box * std::sqrt(f * (1.0 - f) / samples)};
}

}  // namespace

TEST_CASE("distance examples") {
    CHECK(distance({0, 0}, {0, 0}) == 0.0);
    CHECK(distance({-0.5, -0.5}, {0.5, 0.5}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(distance({0.1, 0}, {0, 0.1}) == doctest::Approx(std::sqrt(0.02)).epsilon(1e-15));
    CHECK(distance({0.3, -0.2}, {-0.1, 0.4}) == distance({-0.1, 0.4}, {0.3, -0.2}));
}

TEST_CASE("clipped area: interior, corner and edge disks") {
    CHECK(clipped_disk_area({{0, 0}, 0.3}) == doctest::Approx(pi * 0.09).epsilon(1e-14));
    CHECK(clipped_disk_area({{0.5, 0.5}, 0.3}) == doctest::Approx(pi * 0.09 / 4).epsilon(1e-14));
    CHECK(clipped_disk_area({{0.5, 0}, 0.3}) == doctest::Approx(pi * 0.09 / 2).epsilon(1e-14));
    CHECK(clipped_disk_area({{0, 0}, 0.0}) == 0.0);
    CHECK(clipped_disk_area({{0.2, -0.1}, 2.0}) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(clipped_disk_area({{3.0, 3.0}, 0.5}) == 0.0);
    CHECK_THROWS_AS(clipped_disk_area({{0, 0}, -0.1}), PreconditionError);
}

TEST_CASE("clipped area near an edge matches rejection sampling") {
    std::mt19937_64 gen(2024);
    const Disk d{{0.45, 0}, 0.1};
    const double exact = clipped_disk_area(d);
    const auto [est, sigma] = rejection_area(d, 10'000'000, gen, exact);
    CHECK(std::abs(est - exact) <= 3 * sigma);
    // circular segment cut at x = 0.5, h = 0.05
    const double r = 0.1, h = 0.05;
    const double seg = r * r * std::acos(h / r) - h * std::sqrt(r * r - h * h);
    CHECK(exact == doctest::Approx(pi * r * r - seg).epsilon(1e-13));
}

TEST_CASE("clipped area agrees with rejection sampling on random disks") {
    std::mt19937_64 gen(77);
    std::uniform_real_distribution<double> c(-0.7, 0.7), rad(0.01, 1.2);
    int beyond3 = 0, beyond6 = 0;
    const int cases = 2000;
    for (int i = 0; i < cases; ++i) {
        const Disk d{{c(gen), c(gen)}, rad(gen)};
        const double exact = clipped_disk_area(d);
        const auto [est, sigma] = rejection_area(d, 4000, gen, exact);
        const double err = std::abs(est - exact);
        if (sigma == 0.0) {
            CHECK(err <= 1e-12);
            continue;
        }
        beyond3 += err > 3 * sigma;
        beyond6 += err > 6 * sigma;
    }
    CHECK(beyond3 <= cases / 100);
    CHECK(beyond6 == 0);
}

TEST_CASE("clipped area invariants") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> c(-0.6, 0.6), rad(0.0, 1.5);
    for (int i = 0; i < 2000; ++i) {
        const Point q{c(gen), c(gen)};
        const double r = rad(gen);
        const double a = clipped_disk_area({q, r});
        CHECK(a >= 0.0);
        CHECK(a <= std::min(pi * r * r, 1.0) + 1e-15);
        CHECK(clipped_disk_area({q, r + 0.01}) >= a);
        // dihedral images of the center
        for (Point img : {Point{-q.x, q.y}, Point{q.x, -q.y}, Point{-q.x, -q.y}, Point{q.y, q.x}, Point{-q.y, q.x},
                          Point{q.y, -q.x}, Point{-q.y, -q.x}}) {
            CHECK(std::abs(clipped_disk_area({img, r}) - a) <= 1e-12);
        }
        const bool inside = std::abs(q.x) + r <= 0.5 && std::abs(q.y) + r <= 0.5;
        if (inside) CHECK(a == doctest::Approx(pi * r * r).epsilon(1e-13));
        if (!inside && r > 0.0) CHECK(a < pi * r * r);
        const double gx = std::max(std::abs(q.x) - 0.5, 0.0), gy = std::max(std::abs(q.y) - 0.5, 0.0);
        if (std::hypot(gx, gy) > r * (1 + 1e-12)) CHECK(a == 0.0);
    }
}

TEST_CASE("clipped lens area") {
    SUBCASE("identical disks equal the clipped disk area") {
        const Disk a{{0, 0}, 0.2};
        const AreaEstimate e = clipped_lens_area(a, a, 200'000, 3);
        CHECK(std::abs(e.value - pi * 0.04) <= 4 * e.std_error + 1e-12);
    }
    SUBCASE("disjoint disks give exactly zero") {
        const AreaEstimate e = clipped_lens_area({{-0.3, 0}, 0.1}, {{0.3, 0}, 0.1}, 1000, 1);
        CHECK(e.value == 0.0);
        CHECK(e.std_error == 0.0);
    }
    SUBCASE("interior lens matches the closed form") {
        const double r = 0.2, d = 0.2;
        const double closed = 2 * r * r * std::acos(d / (2 * r)) - d / 2 * std::sqrt(4 * r * r - d * d);
        CHECK(lens_area(d, r) == doctest::Approx(closed).epsilon(1e-14));
        const AreaEstimate e = clipped_lens_area({{-0.1, 0}, r}, {{0.1, 0}, r}, 400'000, 9);
        CHECK(std::abs(e.value - closed) <= 4 * e.std_error);
        CHECK(lens_inside_unit_square({{-0.1, 0}, r}, {{0.1, 0}, r}));
    }
    SUBCASE("deterministic per seed and bounded by either disk") {
        const Disk a{{0.4, 0.4}, 0.25}, b{{0.3, 0.45}, 0.25};
        const AreaEstimate e1 = clipped_lens_area(a, b, 50'000, 11);
        const AreaEstimate e2 = clipped_lens_area(a, b, 50'000, 11);
        CHECK(e1.value == e2.value);
        CHECK(e1.value <= std::min(clipped_disk_area(a), clipped_disk_area(b)) + 1e-12);
        CHECK_FALSE(lens_inside_unit_square(a, b));
    }
    CHECK_THROWS_AS(clipped_lens_area({{0, 0}, 0.1}, {{0, 0}, 0.2}, 10, 1), PreconditionError);
    CHECK_THROWS_AS(clipped_lens_area({{0, 0}, 0.1}, {{0, 0}, 0.1}, 0, 1), PreconditionError);
}

TEST_CASE("circle pair intersections") {
    const CircleIntersection t = circle_pair_intersections({{0, 0}, 0.2}, {{0.4, 0}, 0.2});
    CHECK(t.kind == IntersectionKind::one);
    REQUIRE(t.points.size() == 1);
    CHECK(t.points[0].x == doctest::Approx(0.2));
    CHECK(t.points[0].y == doctest::Approx(0.0));

    const CircleIntersection two = circle_pair_intersections({{0, 0}, 0.2}, {{0.2, 0}, 0.2});
    CHECK(two.kind == IntersectionKind::two);
    REQUIRE(two.points.size() == 2);
    for (const Point& p : two.points) {
        CHECK(p.x == doctest::Approx(0.1));
        CHECK(std::abs(p.y) == doctest::Approx(0.1 * std::sqrt(3.0)));
    }
    CHECK(two.points[0].y == doctest::Approx(-two.points[1].y));

    CHECK(circle_pair_intersections({{0, 0}, 0.2}, {{1, 0}, 0.2}).kind == IntersectionKind::none);
    CHECK(circle_pair_intersections({{0, 0}, 0.3}, {{0.05, 0}, 0.1}).kind == IntersectionKind::none);
    CHECK(circle_pair_intersections({{0.1, 0.1}, 0.2}, {{0.1, 0.1}, 0.2}).kind == IntersectionKind::coincident);

    std::mt19937_64 gen(8);
    std::uniform_real_distribution<double> c(-0.5, 0.5), rad(0.05, 0.5);
    for (int i = 0; i < 500; ++i) {
        const Disk a{{c(gen), c(gen)}, rad(gen)}, b{{c(gen), c(gen)}, rad(gen)};
        for (const Point& p : circle_pair_intersections(a, b).points) {
            CHECK(std::abs(distance(p, a.center) - a.radius) < 1e-9);
            CHECK(std::abs(distance(p, b.center) - b.radius) < 1e-9);
        }
    }
}

TEST_CASE("circle square intersections") {
    auto corner = circle_square_intersections({{0.5, 0.5}, 0.2});
    REQUIRE(corner.size() == 2);
    std::sort(corner.begin(), corner.end(), [](Point a, Point b) { return a.x < b.x; });
    CHECK(corner[0].x == doctest::Approx(0.3));
    CHECK(corner[0].y == doctest::Approx(0.5));
    CHECK(corner[1].x == doctest::Approx(0.5));
    CHECK(corner[1].y == doctest::Approx(0.3));

    CHECK(circle_square_intersections({{0, 0}, 0.3}).empty());

    auto chord = circle_square_intersections({{0, 0.45}, 0.1});
    REQUIRE(chord.size() == 2);
    for (const Point& p : chord) {
        CHECK(p.y == doctest::Approx(0.5));
        CHECK(std::abs(p.x) == doctest::Approx(std::sqrt(0.01 - 0.0025)));
    }

    std::mt19937_64 gen(12);
    std::uniform_real_distribution<double> c(-0.6, 0.6), rad(0.05, 0.8);
    for (int i = 0; i < 500; ++i) {
        const Disk d{{c(gen), c(gen)}, rad(gen)};
        for (const Point& p : circle_square_intersections(d)) {
            CHECK(std::abs(distance(p, d.center) - d.radius) < 1e-9);
            const bool on_edge = std::abs(std::abs(p.x) - 0.5) < 1e-12 || std::abs(std::abs(p.y) - 0.5) < 1e-12;
            CHECK(on_edge);
            CHECK(inside_unit_square(p, 1e-12));
        }
    }
}
