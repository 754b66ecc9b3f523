#include "fwsn/random_model.hpp"

#include "fwsn/error.hpp"
#include "fwsn/geometry.hpp"
#include "fwsn/kernels.hpp"
#include "fwsn/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace fwsn::random_model {
namespace {

constexpr std::uint64_t kLensSamples = 4096;
// Pair integrands below this are replaced by their upper bound (1 - p max nu)^(n-2)
// instead of estimating the lens; the substitution can only raise J.
constexpr double kNegligible = 1e-30;

double choose2(std::uint64_t n) { return 0.5 * static_cast<double>(n) * static_cast<double>(n - 1); }

void check_rand(std::uint64_t n, double r, double p) {
    require(std::isfinite(r) && r >= 0.0, "radius must be a finite nonnegative number");
    require(p > 0.0 && p <= 1.0, "link probability p must lie in (0, 1]");
    (void)n;
}

double power(double base, double exponent) {
    if (exponent == 0.0) return 1.0;
    if (base <= 0.0) return 0.0;
    return std::exp(exponent * std::log(base));
}

std::uint64_t lens_seed(std::uint64_t seed, Point x, Point y) {
    std::uint64_t h = mix64(seed ^ std::bit_cast<std::uint64_t>(x.x));
    h = mix64(h ^ std::bit_cast<std::uint64_t>(x.y));
    h = mix64(h ^ std::bit_cast<std::uint64_t>(y.x));
    return mix64(h ^ std::bit_cast<std::uint64_t>(y.y));
}

// Probability that one further node links to neither X nor Y, raised to
// the power n - 2.
struct PairIsolation {
    std::uint64_t n;
    double r;
    double p;
    std::uint64_t seed;

    double operator()(Point x, Point y) const {
        const double nx = geometry::clipped_disk_area({x, r});
        const double ny = geometry::clipped_disk_area({y, r});
        const double exponent = static_cast<double>(n - 2);
        const double upper = std::max(0.0, 1.0 - p * std::max(nx, ny));
        const double upper_pow = power(upper, exponent);
        if (upper_pow < kNegligible) return upper_pow;

        double lens = 0.0;
        const double d = geometry::distance(x, y);
        if (d <= 2.0 * r) {
            const Disk a{x, r}, b{y, r};
            lens = geometry::lens_inside_unit_square(a, b)
                       ? geometry::lens_area(d, r)
                       : geometry::clipped_lens_area(a, b, kLensSamples, lens_seed(seed, x, y)).value;
        }
        const double base = std::clamp(1.0 - p * nx - p * ny + p * p * lens, 0.0, upper);
        return power(base, exponent);
    }
};

DiscEstimate finish(QuadResult q, std::uint64_t n, const char* what) {
    const double scale = static_cast<double>(n);
    if (!q.converged) {
        throw ConvergenceError(std::string(what) + ": quadrature did not reach the requested tolerance",
                               scale * q.error_estimate);
    }
    DiscEstimate e;
    e.raw = scale * q.value;
    e.value = std::clamp(e.raw, 0.0, 1.0);
    e.error_estimate = scale * q.error_estimate;
    e.evaluations = q.evaluations;
    e.outside_regime = e.raw > 0.1;
    return e;
}

}  // namespace

double rand_cov_lower(std::uint64_t n, double r, const VirtualGrid& vg) {
    require(vg.deflated_radius > 0.0, "deflated radius r - 1/sqrt(2l) is not positive; raise l");
    (void)r;
    const std::vector<Point> pts = grid::virtual_positions(vg);
    std::vector<double> xs(pts.size()), ys(pts.size()), nu(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        xs[i] = pts[i].x;
        ys[i] = pts[i].y;
    }
    kernels::clipped_disk_area(xs, ys, vg.deflated_radius, nu);
    double miss = 0.0;
    const auto nn = static_cast<double>(n);
    for (double v : nu) miss += v >= 1.0 ? (n == 0 ? 1.0 : 0.0) : std::exp(nn * std::log1p(-v));
    return std::max(0.0, 1.0 - miss);
}

double rand_cov_upper(std::uint64_t n, double r) {
    require(std::isfinite(r) && r >= 0.0, "radius must be a finite nonnegative number");
    if (r == 0.0 || n == 0) return 0.0;
    const double m = static_cast<double>(grid::packing_exponent(r));
    const double disk = std::numbers::pi * r * r;
    const auto nn = static_cast<double>(n);
    // 1 - (1 - a)^n for a point whose ball has clipped area at most a.
    auto covered = [&](double a) { return a >= 1.0 ? 1.0 : -std::expm1(nn * std::log1p(-a)); };
    const struct {
        double area;
        double exponent;
    } factors[] = {{disk / 4.0, 4.0}, {disk / 2.0, 4.0 * m}, {disk, m * m}};
    double log_product = 0.0;
    for (const auto& f : factors) {
        if (f.exponent == 0.0) continue;
        const double c = covered(f.area);
        if (c <= 0.0) return 0.0;
        log_product += f.exponent * std::log(c);
    }
    return std::exp(log_product);
}

DiscEstimate disc_estimate(std::uint64_t n, double r, double p, double tol) {
    require(n >= 2, "disc_estimate needs n >= 2");
    check_rand(n, r, p);
    require(tol > 0.0, "tolerance must be positive");
    const auto exponent = static_cast<double>(n - 1);
    BatchIntegrand f = [&](std::span<const double> xs, std::span<const double> ys, std::span<double> out) {
        kernels::clipped_disk_area(xs, ys, r, out);
        for (double& v : out) v = std::exp(exponent * std::log1p(-(v * p)));
    };
    return finish(quad::integrate_octant_symmetric_batch(f, tol / static_cast<double>(n)), n, "disc_estimate");
}

double disc_lower_bound(std::uint64_t n, double r, double p, std::uint64_t pair_samples,
                        std::uint64_t seed, double* stderr_out, double tol) {
    const DiscEstimate a1 = disc_estimate(n, r, p, tol);
    const QuadResult j = quad::mc_pair_integral(PairIsolation{n, r, p, seed}, pair_samples, seed);
    if (stderr_out) *stderr_out = choose2(n) * j.error_estimate;
    return std::max(0.0, a1.raw - choose2(n) * j.value);
}

QuadResult isolated_pair_term(std::uint64_t n, double r, double p, std::uint64_t pair_samples,
                              std::uint64_t seed) {
    require(n >= 4, "isolated_pair_term needs n >= 4");
    check_rand(n, r, p);
    const PairIsolation isolation{n, r, p, seed};
    const double r2 = r * r;
    QuadResult q = quad::mc_pair_integral(
        [&](Point x, Point y) {
            if (geometry::distance_squared(x, y) > r2) return 0.0;
            return p * isolation(x, y);
        },
        pair_samples, derive_seed(seed, 2));
    q.value *= choose2(n);
    q.error_estimate *= choose2(n);
    return q;
}

DiscBoundReport disc_bounds(std::uint64_t n, double r, double p, std::uint64_t pair_samples,
                            std::uint64_t seed, double tol) {
    DiscBoundReport rep;
    const DiscEstimate a1 = disc_estimate(n, r, p, tol);
    const QuadResult j = quad::mc_pair_integral(PairIsolation{n, r, p, seed}, pair_samples, seed);
    const QuadResult a2 = isolated_pair_term(n, r, p, pair_samples, seed);
    rep.a1 = a1.raw;
    rep.a1_error = a1.error_estimate;
    rep.estimate = a1.value;
    rep.lower = std::max(0.0, a1.raw - choose2(n) * j.value);
    rep.pair_stderr = choose2(n) * j.error_estimate;
    rep.a2 = a2.value;
    rep.a2_stderr = a2.error_estimate;
    rep.upper_truncated = std::min(1.0, a1.raw + a2.value);
    return rep;
}

DiscEstimate kdisc_estimate(std::uint64_t n, double r, unsigned k, double tol) {
    require(k >= 1 && k < n, "kdisc_estimate needs 1 <= k < n");
    check_rand(n, r, 1.0);
    require(tol > 0.0, "tolerance must be positive");
    std::vector<double> log_choose(k, 0.0);
    for (unsigned j = 1; j < k; ++j) {
        log_choose[j] = log_choose[j - 1] + std::log(static_cast<double>(n - j + 1)) - std::log(static_cast<double>(j));
    }
    const auto exponent = static_cast<double>(n - 1);
    BatchIntegrand f = [&](std::span<const double> xs, std::span<const double> ys, std::span<double> out) {
        kernels::clipped_disk_area(xs, ys, r, out);
        for (double& v : out) {
            const double miss = std::log1p(-v);
            double s = std::exp(exponent * miss);
            if (v > 0.0 && v < 1.0) {
                const double lv = std::log(v);
                for (unsigned j = 1; j < k; ++j) {
                    s += std::exp(log_choose[j] + j * lv + (exponent - j) * miss);
                }
            }
            v = s;
        }
    };
    return finish(quad::integrate_octant_symmetric_batch(f, tol / static_cast<double>(n)), n, "kdisc_estimate");
}

double asymptotic_disc(std::uint64_t n, double r) {
    require(n >= 1, "asymptotic_disc needs n >= 1");
    require(std::isfinite(r) && r >= 0.0, "radius must be a finite nonnegative number");
    const auto nn = static_cast<double>(n);
    return -std::expm1(-nn * std::exp(-nn * std::numbers::pi * r * r));
}

}  // namespace fwsn::random_model
