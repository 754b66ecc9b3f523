#pragma once

// Uniform random deployments g(n, r, p): n nodes i.i.d. uniform on S0, a link
// between nodes within distance r present independently with probability p.

#include "fwsn/grid_model.hpp"
#include "fwsn/quadrature.hpp"

#include <cstdint>

namespace fwsn {

struct RandSpec {
    std::uint64_t n = 0;
    double r = 0.0;
    double p = 1.0;
};

// Single-integral disconnectivity estimate. `value` is clamped to [0, 1];
// `raw` keeps the unclamped n * integral, which exceeds 1 for small r.
struct DiscEstimate {
    double value = 0.0;
    double raw = 0.0;
    double error_estimate = 0.0;
    std::uint64_t evaluations = 0;
    // Set when raw > 0.1, outside the regime where the estimate is meaningful.
    bool outside_regime = false;
};

struct DiscBoundReport {
    double lower = 0.0;
    double upper_truncated = 0.0;  // a1 + a2; the remaining terms are not computed
    double estimate = 0.0;         // a1, clamped
    double a1 = 0.0;
    double a2 = 0.0;
    double a1_error = 0.0;     // quadrature error estimate
    double pair_stderr = 0.0;  // Monte Carlo standard error of C(n,2) * J
    double a2_stderr = 0.0;
    bool truncated = true;
};

inline constexpr double kDefaultTolerance = 1e-6;
inline constexpr std::uint64_t kDefaultPairSamples = 1'000'000;

namespace random_model {

double rand_cov_lower(std::uint64_t n, double r, const VirtualGrid& vg);
double rand_cov_upper(std::uint64_t n, double r);

DiscEstimate disc_estimate(std::uint64_t n, double r, double p, double tol = kDefaultTolerance);

// a1 - C(n,2) J clamped at 0; `stderr_out` receives the standard error of the
// pair term when non-null.
double disc_lower_bound(std::uint64_t n, double r, double p, std::uint64_t pair_samples,
                        std::uint64_t seed, double* stderr_out = nullptr,
                        double tol = kDefaultTolerance);

// a2 = C(n,2) Pr{nodes 1 and 2 form an isolated component}.
QuadResult isolated_pair_term(std::uint64_t n, double r, double p, std::uint64_t pair_samples,
                              std::uint64_t seed);

DiscBoundReport disc_bounds(std::uint64_t n, double r, double p, std::uint64_t pair_samples,
                            std::uint64_t seed, double tol = kDefaultTolerance);

// Estimated Pr{g(n, r) is not k-connected}.
DiscEstimate kdisc_estimate(std::uint64_t n, double r, unsigned k, double tol = kDefaultTolerance);

// 1 - exp(-n exp(-n pi r^2)).
double asymptotic_disc(std::uint64_t n, double r);

}  // namespace random_model
}  // namespace fwsn
