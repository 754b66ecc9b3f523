#pragma once

// Unreliable sensor grids: sqrt(n) x sqrt(n) cell-centered lattice on S0 with
// each sensor active independently with probability p.

#include "fwsn/geometry.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fwsn {

struct GridSpec {
    std::uint64_t n = 0;
    double p = 0.0;
    double radius = 0.0;
};

// sqrt(l) x sqrt(l) lattice of test points; covering it at the deflated
// radius r' = r - 1/sqrt(2l) implies covering S0 at r.
struct VirtualGrid {
    std::uint64_t l = 0;
    double deflated_radius = 0.0;

    // Throws PreconditionError when l is not a perfect square or r' <= 0.
    static VirtualGrid with_size(std::uint64_t l, double r);
    // Smallest perfect square l with r' >= r / 2.
    static VirtualGrid for_radius(double r);
};

struct Breakpoint {
    std::uint64_t lattice_sq = 0;  // a^2 + b^2, so value = sqrt(lattice_sq / n)
    double value = 0.0;
};

using BreakpointSet = std::vector<Breakpoint>;

struct BoundReport {
    double r = 0.0;
    std::optional<double> lower;
    std::optional<double> upper;
    std::optional<double> estimate;
    std::optional<double> baseline;
    std::optional<double> klb_r_low;
    std::optional<double> klb_r_high;
    std::string provenance;
};

namespace grid {

// Integer side of the lattice; throws unless n is a positive perfect square.
std::uint64_t side(std::uint64_t n);

std::vector<Point> grid_positions(std::uint64_t n);
std::vector<Point> virtual_positions(const VirtualGrid& vg);

// Sensors within closed distance r of q.
std::uint64_t neighbor_count(std::uint64_t n, double r, Point q);

// Pr(Bin(count, p) >= k), or its logarithm.
double binomial_upper_tail(std::uint64_t count, double p, unsigned k);
double log_binomial_upper_tail(std::uint64_t count, double p, unsigned k);

double grid_cov_lower(const GridSpec& spec, unsigned k, const VirtualGrid& vg);
double grid_cov_upper(const GridSpec& spec, unsigned k);

// floor((1 - 2r) / (2r)) clamped at 0; shared with the random upper bound.
std::uint64_t packing_exponent(double r);

// Realizable lattice distances up to sqrt(2)/2 plus the first one beyond.
BreakpointSet grid_breakpoints(std::uint64_t n);

struct KlbThresholds {
    double r_low = 0.0;
    double r_high = 0.0;
};

KlbThresholds asymptotic_klb_thresholds(std::uint64_t n, double p, double eps);

}  // namespace grid
}  // namespace fwsn
