#include "fwsn/quadrature.hpp"

#include "fwsn/error.hpp"
#include "fwsn/parallel.hpp"
#include "fwsn/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

namespace fwsn::quad {
namespace {

// Genz-Malik generators and weights for two dimensions, normalized so each
// rule's weights sum to one over [-1, 1]^2.
const double kL2 = std::sqrt(9.0 / 70.0);
const double kL3 = std::sqrt(9.0 / 10.0);
const double kL5 = std::sqrt(9.0 / 19.0);

constexpr double kW1 = -3816.0 / 19683.0;
constexpr double kW2 = 980.0 / 6561.0;
constexpr double kW3 = 1020.0 / 19683.0;
constexpr double kW4 = 200.0 / 19683.0;
constexpr double kW5 = 6859.0 / 19683.0 / 4.0;
constexpr double kE1 = -971.0 / 729.0;
constexpr double kE2 = 245.0 / 486.0;
constexpr double kE3 = 65.0 / 1458.0;
constexpr double kE4 = 25.0 / 729.0;

constexpr int kRulePoints = 17;

// Unit offsets of the 17 nodes: center, +-L2 on each axis, +-L3 on each
// axis, (+-L3, +-L3), (+-L5, +-L5).
struct Offsets {
    std::array<double, kRulePoints> u;
    std::array<double, kRulePoints> v;
};

const Offsets& offsets() {
    static const Offsets table = [] {
        Offsets o{};
        int k = 0;
        auto put = [&](double u, double v) {
            o.u[k] = u;
            o.v[k] = v;
            ++k;
        };
        put(0, 0);
        put(-kL2, 0), put(kL2, 0), put(0, -kL2), put(0, kL2);
        put(-kL3, 0), put(kL3, 0), put(0, -kL3), put(0, kL3);
        put(-kL3, -kL3), put(kL3, -kL3), put(-kL3, kL3), put(kL3, kL3);
        put(-kL5, -kL5), put(kL5, -kL5), put(-kL5, kL5), put(kL5, kL5);
        return o;
    }();
    return table;
}

struct Cell {
    double cx, cy, hx, hy;
    double value = 0.0;
    double error = 0.0;
    int split_axis = 0;
};

void fill_nodes(const Cell& c, double* xs, double* ys) {
    const Offsets& o = offsets();
    for (int k = 0; k < kRulePoints; ++k) {
        xs[k] = c.cx + c.hx * o.u[k];
        ys[k] = c.cy + c.hy * o.v[k];
    }
}

void apply_rule(Cell& c, const double* f) {
    const double s2 = f[1] + f[2] + f[3] + f[4];
    const double s3 = f[5] + f[6] + f[7] + f[8];
    const double s4 = f[9] + f[10] + f[11] + f[12];
    const double s5 = f[13] + f[14] + f[15] + f[16];
    const double area = 4.0 * c.hx * c.hy;
    const double high = kW1 * f[0] + kW2 * s2 + kW3 * s3 + kW4 * s4 + kW5 * s5;
    const double low = kE1 * f[0] + kE2 * s2 + kE3 * s3 + kE4 * s4;
    c.value = area * high;
    c.error = area * std::abs(high - low);

    // Split along the axis with the larger fourth difference.
    constexpr double ratio = 1.0 / 7.0;  // L2^2 / L3^2
    const double dx = std::abs(f[1] + f[2] - 2 * f[0] - ratio * (f[5] + f[6] - 2 * f[0]));
    const double dy = std::abs(f[3] + f[4] - 2 * f[0] - ratio * (f[7] + f[8] - 2 * f[0]));
    if (std::abs(dx - dy) <= 1e-14 * std::max(dx, dy)) {
        c.split_axis = c.hx >= c.hy ? 0 : 1;
    } else {
        c.split_axis = dx > dy ? 0 : 1;
    }
}

struct HeapEntry {
    double error;
    std::size_t id;

    bool operator<(const HeapEntry& other) const {
        if (error != other.error) return error < other.error;
        return id > other.id;
    }
};

}  // namespace

BatchIntegrand batched(Integrand f) {
    return [f = std::move(f)](std::span<const double> xs, std::span<const double> ys, std::span<double> out) {
        for (std::size_t i = 0; i < xs.size(); ++i) out[i] = f(Point{xs[i], ys[i]});
    };
}

QuadResult integrate_rectangle(const BatchIntegrand& f, double x0, double x1, double y0, double y1,
                               double tol, const QuadOptions& options) {
    require(tol > 0.0, "integrate: tolerance must be positive");
    require(x1 > x0 && y1 > y0, "integrate: empty rectangle");
    require(options.initial_divisions >= 1, "integrate: initial_divisions must be >= 1");

    std::vector<Cell> cells;
    std::vector<char> live;
    std::vector<double> xs, ys, fv;
    std::uint64_t evaluations = 0;

    auto evaluate = [&](std::span<Cell> batch) {
        const std::size_t points = batch.size() * kRulePoints;
        xs.resize(points);
        ys.resize(points);
        fv.resize(points);
        for (std::size_t i = 0; i < batch.size(); ++i) {
            fill_nodes(batch[i], xs.data() + i * kRulePoints, ys.data() + i * kRulePoints);
        }
        f(xs, ys, fv);
        for (std::size_t i = 0; i < batch.size(); ++i) apply_rule(batch[i], fv.data() + i * kRulePoints);
        evaluations += points;
    };

    const int m = options.initial_divisions;
    const double hx = 0.5 * (x1 - x0) / m;
    const double hy = 0.5 * (y1 - y0) / m;
    cells.reserve(static_cast<std::size_t>(m) * m * 4);
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) {
            cells.push_back(Cell{x0 + (2 * i + 1) * hx, y0 + (2 * j + 1) * hy, hx, hy});
        }
    }
    evaluate(cells);
    live.assign(cells.size(), 1);

    std::priority_queue<HeapEntry> heap;
    double total_error = 0.0;
    for (std::size_t id = 0; id < cells.size(); ++id) {
        heap.push({cells[id].error, id});
        total_error += cells[id].error;
    }

    auto exact_error = [&] {
        double e = 0.0;
        for (std::size_t id = 0; id < cells.size(); ++id) {
            if (live[id]) e += cells[id].error;
        }
        return e;
    };

    bool converged = false;
    while (true) {
        if (total_error <= tol) {
            total_error = exact_error();
            if (total_error <= tol) {
                converged = true;
                break;
            }
        }
        if (evaluations + 2 * kRulePoints > options.max_evaluations || heap.empty()) break;

        const HeapEntry top = heap.top();
        heap.pop();
        const Cell parent = cells[top.id];
        live[top.id] = 0;

        std::array<Cell, 2> kids{parent, parent};
        if (parent.split_axis == 0) {
            kids[0].hx = kids[1].hx = 0.5 * parent.hx;
            kids[0].cx = parent.cx - kids[0].hx;
            kids[1].cx = parent.cx + kids[1].hx;
        } else {
            kids[0].hy = kids[1].hy = 0.5 * parent.hy;
            kids[0].cy = parent.cy - kids[0].hy;
            kids[1].cy = parent.cy + kids[1].hy;
        }
        evaluate(kids);
        total_error -= parent.error;
        for (const Cell& kid : kids) {
            heap.push({kid.error, cells.size()});
            cells.push_back(kid);
            live.push_back(1);
            total_error += kid.error;
        }
    }

    QuadResult result;
    for (std::size_t id = 0; id < cells.size(); ++id) {
        if (live[id]) result.value += cells[id].value;
    }
    result.error_estimate = exact_error();
    result.evaluations = evaluations;
    result.converged = converged;
    return result;
}

QuadResult integrate_unit_square(const Integrand& f, double tol, const QuadOptions& options) {
    return integrate_unit_square_batch(batched(f), tol, options);
}

QuadResult integrate_unit_square_batch(const BatchIntegrand& f, double tol, const QuadOptions& options) {
    return integrate_rectangle(f, -kHalfSide, kHalfSide, -kHalfSide, kHalfSide, tol, options);
}

QuadResult integrate_octant_symmetric(const Integrand& f, double tol, const QuadOptions& options) {
    return integrate_octant_symmetric_batch(batched(f), tol, options);
}

QuadResult integrate_octant_symmetric_batch(const BatchIntegrand& f, double tol, const QuadOptions& options) {
    require(tol > 0.0, "integrate: tolerance must be positive");

    // Probe the eight images of a few seeded points.
    constexpr int kProbes = 16;
    std::vector<double> px, py, pv(8 * kProbes);
    SplitMix64 rng(0x5eed0c7a);
    for (int i = 0; i < kProbes; ++i) {
        const double x = rng.uniform() - 0.5;
        const double y = rng.uniform() - 0.5;
        const double images[8][2] = {{x, y}, {-x, y}, {x, -y}, {-x, -y}, {y, x}, {-y, x}, {y, -x}, {-y, -x}};
        for (const auto& p : images) {
            px.push_back(p[0]);
            py.push_back(p[1]);
        }
    }
    f(px, py, pv);
    for (int i = 0; i < kProbes; ++i) {
        const double base = pv[8 * i];
        for (int j = 1; j < 8; ++j) {
            const double v = pv[8 * i + j];
            if (std::abs(v - base) > 1e-10 * std::max(1.0, std::abs(base))) {
                throw PreconditionError("integrate_octant_symmetric: integrand is not symmetric under the square's symmetries");
            }
        }
    }

    // {0 <= y <= x <= 0.5} through y = x t, dy = x dt.
    std::vector<double> mapped_y;
    BatchIntegrand over_octant = [&f, &mapped_y](std::span<const double> xs, std::span<const double> ts,
                                                 std::span<double> out) {
        mapped_y.resize(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) mapped_y[i] = xs[i] * ts[i];
        f(xs, mapped_y, out);
        for (std::size_t i = 0; i < xs.size(); ++i) out[i] *= xs[i];
    };
    // The map bends the integrand's kinks into curves, where the embedded rule
    // underestimates its error; the reported estimate carries a safety factor.
    constexpr double kSafety = 4.0;
    QuadResult r = integrate_rectangle(over_octant, 0.0, kHalfSide, 0.0, 1.0, tol / (8.0 * kSafety), options);
    r.value *= 8.0;
    r.error_estimate *= 8.0 * kSafety;
    r.evaluations += 8 * kProbes;
    return r;
}

QuadResult mc_pair_integral(const PairIntegrand& g, std::uint64_t samples, std::uint64_t seed,
                            unsigned workers) {
    require(samples > 0, "mc_pair_integral: samples must be positive");
    constexpr std::uint64_t kBlock = 1 << 16;
    const std::uint64_t blocks = (samples + kBlock - 1) / kBlock;

    struct Stats {
        double count = 0, mean = 0, m2 = 0;
    };
    std::vector<Stats> stats(blocks);
    parallel_for(blocks, workers, [&](std::size_t b) {
        SplitMix64 rng(derive_seed(seed, b));
        const std::uint64_t begin = b * kBlock;
        const std::uint64_t end = std::min(samples, begin + kBlock);
        Stats s;
        for (std::uint64_t i = begin; i < end; ++i) {
            const Point x{rng.uniform() - 0.5, rng.uniform() - 0.5};
            const Point y{rng.uniform() - 0.5, rng.uniform() - 0.5};
            const double v = g(x, y);
            s.count += 1;
            const double delta = v - s.mean;
            s.mean += delta / s.count;
            s.m2 += delta * (v - s.mean);
        }
        stats[b] = s;
    });

    Stats total;
    for (const Stats& s : stats) {
        if (s.count == 0) continue;
        const double n = total.count + s.count;
        const double delta = s.mean - total.mean;
        total.mean += delta * s.count / n;
        total.m2 += s.m2 + delta * delta * total.count * s.count / n;
        total.count = n;
    }
    QuadResult r;
    r.value = total.mean;
    r.error_estimate = total.count > 1 ? std::sqrt(std::max(0.0, total.m2) / (total.count - 1) / total.count) : 0.0;
    r.evaluations = samples;
    r.converged = true;
    return r;
}

}  // namespace fwsn::quad
