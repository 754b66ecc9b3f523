#include "fwsn/grid_model.hpp"

#include "fwsn/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

namespace fwsn {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::uint64_t perfect_square_root(std::uint64_t v) {
    auto s = static_cast<std::uint64_t>(std::llround(std::sqrt(static_cast<double>(v))));
    while (s * s > v) --s;
    while ((s + 1) * (s + 1) <= v) ++s;
    return s * s == v ? s : 0;
}

std::vector<Point> lattice(std::uint64_t s) {
    std::vector<Point> pts;
    pts.reserve(s * s);
    const double h = 1.0 / static_cast<double>(s);
    for (std::uint64_t j = 0; j < s; ++j) {
        for (std::uint64_t i = 0; i < s; ++i) {
            pts.push_back({(static_cast<double>(i) + 0.5) * h - 0.5, (static_cast<double>(j) + 0.5) * h - 0.5});
        }
    }
    return pts;
}

double log_sum_exp(const std::vector<double>& terms, std::size_t begin, std::size_t end) {
    double hi = kNegInf;
    for (std::size_t i = begin; i < end; ++i) hi = std::max(hi, terms[i]);
    if (hi == kNegInf) return kNegInf;
    double s = 0.0;
    for (std::size_t i = begin; i < end; ++i) s += std::exp(terms[i] - hi);
    return hi + std::log(s);
}

}  // namespace

VirtualGrid VirtualGrid::with_size(std::uint64_t l, double r) {
    require(l > 0 && perfect_square_root(l) != 0, "virtual grid size l must be a positive perfect square");
    VirtualGrid vg;
    vg.l = l;
    vg.deflated_radius = r - 1.0 / std::sqrt(2.0 * static_cast<double>(l));
    require(vg.deflated_radius > 0.0,
            "deflated radius r - 1/sqrt(2l) is not positive; raise l");
    return vg;
}

VirtualGrid VirtualGrid::for_radius(double r) {
    require(r > 0.0 && std::isfinite(r), "virtual grid needs a positive finite radius");
    // 1 / (s sqrt 2) <= r / 2  <=>  s >= sqrt(2) / r
    auto s = static_cast<std::uint64_t>(std::ceil(std::numbers::sqrt2 / r));
    s = std::max<std::uint64_t>(s, 1);
    while (1.0 / (static_cast<double>(s) * std::numbers::sqrt2) > r / 2.0) ++s;
    return with_size(s * s, r);
}

namespace grid {

std::uint64_t side(std::uint64_t n) {
    const std::uint64_t s = n == 0 ? 0 : perfect_square_root(n);
    require(s != 0, "n must be a positive perfect square, got " + std::to_string(n));
    return s;
}

std::vector<Point> grid_positions(std::uint64_t n) { return lattice(side(n)); }

std::vector<Point> virtual_positions(const VirtualGrid& vg) { return lattice(side(vg.l)); }

std::uint64_t neighbor_count(std::uint64_t n, double r, Point q) {
    const std::uint64_t s = side(n);
    require(r >= 0.0, "neighbor_count: radius must be nonnegative");
    const double h = 1.0 / static_cast<double>(s);
    const double reach = r + kGeomEps;
    const auto last = static_cast<double>(s - 1);

    // Column by column: lattice coordinate c_i = (i + 0.5) h - 0.5.
    auto first_index = [&](double lo) { return std::max(0.0, std::ceil((lo + 0.5) / h - 0.5)); };
    auto last_index = [&](double hi) { return std::min(last, std::floor((hi + 0.5) / h - 0.5)); };

    std::uint64_t count = 0;
    const double i0 = first_index(q.x - reach);
    const double i1 = last_index(q.x + reach);
    for (double i = i0; i <= i1; i += 1.0) {
        const double dx = (i + 0.5) * h - 0.5 - q.x;
        const double w2 = reach * reach - dx * dx;
        if (w2 < 0.0) continue;
        const double w = std::sqrt(w2);
        const double j0 = first_index(q.y - w);
        const double j1 = last_index(q.y + w);
        if (j1 >= j0) count += static_cast<std::uint64_t>(j1 - j0) + 1;
    }
    return count;
}

double log_binomial_upper_tail(std::uint64_t count, double p, unsigned k) {
    if (k == 0) return 0.0;
    if (count < k || p <= 0.0) return kNegInf;
    if (p >= 1.0) return 0.0;

    const double lp = std::log(p);
    const double lq = std::log1p(-p);
    std::vector<double> terms(count + 1);
    double lc = 0.0;  // log C(count, i)
    for (std::uint64_t i = 0; i <= count; ++i) {
        terms[i] = lc + static_cast<double>(i) * lp + static_cast<double>(count - i) * lq;
        lc += std::log(static_cast<double>(count - i)) - std::log(static_cast<double>(i + 1));
    }
    const double lower = std::exp(log_sum_exp(terms, 0, k));
    if (lower <= 0.5) return std::log1p(-lower);
    return log_sum_exp(terms, k, count + 1);
}

double binomial_upper_tail(std::uint64_t count, double p, unsigned k) {
    return std::exp(log_binomial_upper_tail(count, p, k));
}

double grid_cov_lower(const GridSpec& spec, unsigned k, const VirtualGrid& vg) {
    side(spec.n);
    require(spec.p >= 0.0 && spec.p <= 1.0, "p must lie in [0, 1]");
    require(k >= 1, "coverage order k must be >= 1");
    require(vg.deflated_radius > 0.0, "deflated radius r - 1/sqrt(2l) is not positive; raise l");

    double log_product = 0.0;
    for (const Point& u : virtual_positions(vg)) {
        log_product += log_binomial_upper_tail(neighbor_count(spec.n, vg.deflated_radius, u), spec.p, k);
        if (log_product == kNegInf) return 0.0;
    }
    return std::exp(log_product);
}

std::uint64_t packing_exponent(double r) {
    require(r > 0.0, "packing exponent needs r > 0");
    const double x = (1.0 - 2.0 * r) / (2.0 * r);
    if (x <= 0.0) return 0;
    return static_cast<std::uint64_t>(std::floor(x + 1e-9));
}

double grid_cov_upper(const GridSpec& spec, unsigned k) {
    side(spec.n);
    require(spec.p >= 0.0 && spec.p <= 1.0, "p must lie in [0, 1]");
    require(k >= 1, "coverage order k must be >= 1");
    require(spec.radius >= 0.0, "radius must be nonnegative");
    if (spec.radius == 0.0) return 0.0;

    const double m = static_cast<double>(packing_exponent(spec.radius));
    const struct {
        Point at;
        double exponent;
    } factors[] = {{{0.5, 0.5}, 4.0}, {{0.5, 0.0}, 4.0 * m}, {{0.0, 0.0}, m * m}};

    double log_product = 0.0;
    for (const auto& f : factors) {
        if (f.exponent == 0.0) continue;
        const double lf = log_binomial_upper_tail(neighbor_count(spec.n, spec.radius, f.at), spec.p, k);
        if (lf == kNegInf) return 0.0;
        log_product += f.exponent * lf;
    }
    return std::exp(log_product);
}

BreakpointSet grid_breakpoints(std::uint64_t n) {
    const std::uint64_t s = side(n);
    std::set<std::uint64_t> sums;
    for (std::uint64_t a = 0; a < s; ++a) {
        for (std::uint64_t b = a; b < s; ++b) {
            if (a + b > 0) sums.insert(a * a + b * b);
        }
    }
    BreakpointSet out;
    for (std::uint64_t m : sums) {
        out.push_back({m, std::sqrt(static_cast<double>(m)) / static_cast<double>(s)});
        if (2 * m > n) break;  // first value past sqrt(2)/2
    }
    return out;
}

KlbThresholds asymptotic_klb_thresholds(std::uint64_t n, double p, double eps) {
    const double np = static_cast<double>(n) * p;
    require(np > 1.0, "KLB thresholds need n*p > 1");
    require(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1)");
    const double base = std::log(np) / (std::numbers::pi * np);
    return {std::sqrt((1.0 - eps) * base), std::sqrt((1.0 + eps) * base)};
}

}  // namespace grid
}  // namespace fwsn
