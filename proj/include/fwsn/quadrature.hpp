#pragma once

// Deterministic adaptive cubature over rectangles of the plane (embedded
// degree-7/degree-5 Genz-Malik pair, worst cell split first) and seeded
// Monte Carlo over pairs of uniform points in S0.

#include "fwsn/geometry.hpp"

#include <cstdint>
#include <functional>
#include <span>

namespace fwsn {

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::uint64_t evaluations = 0;
    bool converged = false;
};

using Integrand = std::function<double(Point)>;
// Fills out[i] = f(xs[i], ys[i]). Lets callers vectorize the point loop.
using BatchIntegrand =
    std::function<void(std::span<const double> xs, std::span<const double> ys, std::span<double> out)>;
using PairIntegrand = std::function<double(Point, Point)>;

struct QuadOptions {
    std::uint64_t max_evaluations = 10'000'000;
    int initial_divisions = 8;  // per axis
};

namespace quad {

QuadResult integrate_rectangle(const BatchIntegrand& f, double x0, double x1, double y0, double y1,
                               double tol, const QuadOptions& options = {});

QuadResult integrate_unit_square(const Integrand& f, double tol, const QuadOptions& options = {});
QuadResult integrate_unit_square_batch(const BatchIntegrand& f, double tol, const QuadOptions& options = {});

// Integrates over {0 <= y <= x <= 0.5} and multiplies by 8. The integrand
// must be invariant under the symmetries of the square; a few seeded probes
// check this and a PreconditionError is thrown on a mismatch above 1e-10.
QuadResult integrate_octant_symmetric(const Integrand& f, double tol, const QuadOptions& options = {});
QuadResult integrate_octant_symmetric_batch(const BatchIntegrand& f, double tol,
                                            const QuadOptions& options = {});

// Mean of g over i.i.d. uniform pairs (X, Y) in S0 x S0. Samples are drawn in
// fixed blocks seeded from (seed, block), so the result does not depend on
// the worker count. error_estimate is the sample standard error.
QuadResult mc_pair_integral(const PairIntegrand& g, std::uint64_t samples, std::uint64_t seed,
                            unsigned workers = 0);

BatchIntegrand batched(Integrand f);

}  // namespace quad
}  // namespace fwsn
