#include "fwsn/cli.hpp"

#include "fwsn/error.hpp"
#include "fwsn/grid_model.hpp"
#include "fwsn/parallel.hpp"
#include "fwsn/random_model.hpp"

#include <ostream>

namespace fwsn::cli {
namespace {

VirtualGrid virtual_grid(const Options& opt, double r) {
    return opt.l ? VirtualGrid::with_size(*opt.l, r) : VirtualGrid::for_radius(r);
}

void add_klb(const Options& opt, BoundReport& row) {
    if (static_cast<double>(opt.n) * opt.p <= 1.0) return;
    const grid::KlbThresholds t = grid::asymptotic_klb_thresholds(opt.n, opt.p, opt.eps);
    row.klb_r_low = t.r_low;
    row.klb_r_high = t.r_high;
}

BoundReport grid_row(const Options& opt, double r) {
    if (opt.property != Property::k_covered) {
        throw PreconditionError("grid bounds exist for k-covered only");
    }
    BoundReport row;
    row.r = r;
    const GridSpec spec{opt.n, opt.p, r};
    row.lower = grid::grid_cov_lower(spec, opt.k, virtual_grid(opt, r));
    row.upper = grid::grid_cov_upper(spec, opt.k);
    add_klb(opt, row);
    row.provenance = "lower:grid-virtual-lattice-product|upper:grid-corner-edge-center-product";
    if (r >= 0.5) row.provenance += "|upper-exponents-clamped";
    if (opt.k > 1) row.provenance += "|k=" + std::to_string(opt.k);
    return row;
}

BoundReport random_row(const Options& opt, double r) {
    BoundReport row;
    row.r = r;
    switch (opt.property) {
        case Property::k_covered: {
            if (opt.k != 1) throw PreconditionError("random coverage bounds are for k = 1");
            row.lower = random_model::rand_cov_lower(opt.n, r, virtual_grid(opt, r));
            row.upper = random_model::rand_cov_upper(opt.n, r);
            add_klb(opt, row);
            row.provenance = "lower:random-virtual-lattice-union|upper:random-packing-product";
            if (r >= 0.5) row.provenance += "|upper-exponents-clamped";
            return row;
        }
        case Property::connected:
        case Property::disconnected: {
            const DiscBoundReport d = random_model::disc_bounds(opt.n, r, opt.p, opt.pairs, opt.seed, opt.tol);
            const double base = random_model::asymptotic_disc(opt.n, r);
            std::string tail = "|a1=" + format_number(d.a1) + "|a2=" + format_number(d.a2);
            if (d.a1 > 0.1) tail += "|estimate-outside-regime";
            if (opt.property == Property::disconnected) {
                row.lower = d.lower;
                row.upper = d.upper_truncated;
                row.estimate = d.estimate;
                row.baseline = base;
                row.provenance = "lower:isolated-node-inclusion-exclusion|upper:a1+a2-truncated"
                                 "|estimate:isolated-node-integral|baseline:asymptotic-disconnectivity" + tail;
            } else {
                row.lower = 1.0 - d.upper_truncated;
                row.upper = 1.0 - d.lower;
                row.estimate = 1.0 - d.estimate;
                row.baseline = 1.0 - base;
                row.provenance = "lower:1-(a1+a2-truncated)|upper:1-isolated-node-inclusion-exclusion"
                                 "|estimate:1-isolated-node-integral|baseline:asymptotic-connectivity" + tail;
            }
            return row;
        }
        case Property::k_connected: {
            if (opt.p != 1.0) throw PreconditionError("the k-connectivity estimate assumes p = 1");
            const DiscEstimate e = random_model::kdisc_estimate(opt.n, r, opt.k, opt.tol);
            row.estimate = 1.0 - e.value;
            row.provenance = "estimate:1-low-degree-integral|k=" + std::to_string(opt.k) + "|raw=" + format_number(e.raw);
            if (e.outside_regime) row.provenance += "|estimate-outside-regime";
            return row;
        }
    }
    return row;
}

}  // namespace

BoundReport bound_row(const Options& opt, double r) {
    return opt.scenario == Scenario::grid ? grid_row(opt, r) : random_row(opt, r);
}

void write_bounds(const Options& opt, std::ostream& out) {
    std::vector<BoundReport> rows(opt.radii.size());
    parallel_for(rows.size(), opt.workers, [&](std::size_t i) { rows[i] = bound_row(opt, opt.radii[i]); });
    out << kBoundsHeader << '\n';
    for (const BoundReport& row : rows) {
        out << format_number(row.r) << ',' << format_optional(row.lower) << ',' << format_optional(row.upper) << ','
            << format_optional(row.estimate) << ',' << format_optional(row.baseline) << ','
            << format_optional(row.klb_r_low) << ',' << format_optional(row.klb_r_high) << ',' << row.provenance
            << '\n';
    }
}

void write_simulate(const Options& opt, std::ostream& out, std::ostream* progress) {
    out << kSimulateHeader << '\n';
    for (std::size_t i = 0; i < opt.radii.size(); ++i) {
        const double r = opt.radii[i];
        SimSpec spec{opt.scenario, opt.property, opt.n, opt.p, r, opt.k};
        EstimateOptions eo;
        eo.workers = opt.workers;
        if (!opt.checkpoint.empty()) eo.checkpoint_path = opt.checkpoint + "." + std::to_string(i);
        if (progress) {
            std::uint64_t last_decile = 0;
            eo.progress = [progress, r, last_decile](std::uint64_t done, std::uint64_t total) mutable {
                const std::uint64_t decile = done * 10 / total;
                if (decile == last_decile && done != total) return;
                last_decile = decile;
                *progress << "simulate r=" << format_number(r) << ": " << done << "/" << total << " trials\n";
            };
        }
        const SimResult res = sim::estimate_probability(spec, opt.trials, opt.seed, eo);
        std::string label = res.label;
        if (opt.property != Property::connected && opt.property != Property::disconnected) {
            label += ":k=" + std::to_string(opt.k);
        }
        out << format_number(r) << ',' << res.trials << ',' << res.successes << ',' << format_number(res.estimate) << ','
            << format_number(res.ci_low) << ',' << format_number(res.ci_high) << ',' << res.seed << ',' << label
            << '\n';
    }
}

void write_breakpoints(const Options& opt, std::ostream& out) {
    BreakpointSet set;
    try {
        set = grid::grid_breakpoints(opt.n);
    } catch (const PreconditionError& e) {
        throw UsageError(e.what());
    }
    out << kBreakpointsHeader << '\n';
    for (std::size_t i = 0; i < set.size(); ++i) {
        const bool beyond = 2 * set[i].lattice_sq > opt.n;
        out << i + 1 << ',' << format_number(set[i].value) << ',' << set[i].lattice_sq << ','
            << (beyond ? "lattice-distance|first-beyond-half-diagonal" : "lattice-distance") << '\n';
    }
}

}  // namespace fwsn::cli
