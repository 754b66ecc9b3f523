#include "fwsn/cli.hpp"

#include "fwsn/error.hpp"
#include "fwsn/grid_model.hpp"
#include "fwsn/parallel.hpp"
#include "fwsn/random_model.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

namespace fwsn::cli {
namespace {

struct ManifestRow {
    std::string file, column, source;
};

class Bundle {
public:
    Bundle(std::filesystem::path dir, std::ostream* progress) : dir_(std::move(dir)), progress_(progress) {
        std::filesystem::create_directories(dir_);
    }

    void write(const std::string& file, const std::function<void(std::ostream&)>& body,
               std::vector<ManifestRow> columns) {
        if (progress_) *progress_ << "reproduce: writing " << (dir_ / file).string() << "\n";
        std::ostringstream csv;
        body(csv);
        std::ofstream out(dir_ / file, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + (dir_ / file).string());
        out << csv.str();
        for (auto& c : columns) {
            c.file = file;
            manifest_.push_back(std::move(c));
        }
    }

    void finish() {
        std::ofstream out(dir_ / "manifest.csv", std::ios::binary | std::ios::trunc);
        out << "file,column,source\n";
        for (const auto& m : manifest_) out << m.file << ',' << m.column << ',' << m.source << '\n';
    }

    std::ostream* progress() const { return progress_; }

private:
    std::filesystem::path dir_;
    std::ostream* progress_;
    std::vector<ManifestRow> manifest_;
};

std::vector<ManifestRow> simulate_columns(const std::string& what) {
    return {{"", "estimate", "simulation: " + what},
            {"", "ci_low", "simulation: Wilson 95% interval"},
            {"", "ci_high", "simulation: Wilson 95% interval"}};
}

Options with(const Options& base, Scenario s, Property prop, std::uint64_t n, double p, unsigned k) {
    Options o = base;
    o.scenario = s;
    o.property = prop;
    o.n = n;
    o.p = p;
    o.k = k;
    return o;
}

void thresholds_csv(const Options& o, std::ostream& out) {
    const grid::KlbThresholds t = grid::asymptotic_klb_thresholds(o.n, o.p, o.eps);
    out << "n,p,k,eps,klb_r_low,klb_r_high,provenance\n";
    out << o.n << ',' << format_number(o.p) << ',' << o.k << ',' << format_number(o.eps) << ','
        << format_number(t.r_low) << ',' << format_number(t.r_high) << ",asymptotic-coverage-thresholds\n";
}

void grid_asymptotic(const Options& base, unsigned k, Bundle& b) {
    Options o = with(base, Scenario::grid, Property::k_covered, 100, 0.2, k);
    b.write("simulation.csv", [&](std::ostream& s) { write_simulate(o, s, b.progress()); },
            simulate_columns("grid k-coverage"));
    b.write("thresholds.csv", [&](std::ostream& s) { thresholds_csv(o, s); },
            {{"", "klb_r_low", "asymptotic coverage threshold (1-eps)"},
             {"", "klb_r_high", "asymptotic coverage threshold (1+eps)"}});
}

void grid_finite(const Options& base, unsigned k, Bundle& b) {
    Options o = with(base, Scenario::grid, Property::k_covered, 100, 0.2, k);
    b.write("bounds.csv", [&](std::ostream& s) { write_bounds(o, s); },
            {{"", "lower", "grid lower bound: product over the virtual lattice"},
             {"", "upper", "grid upper bound: corner/edge/center product"},
             {"", "klb_r_low", "asymptotic coverage threshold (1-eps)"},
             {"", "klb_r_high", "asymptotic coverage threshold (1+eps)"}});
    b.write("simulation.csv", [&](std::ostream& s) { write_simulate(o, s, b.progress()); },
            simulate_columns("grid k-coverage"));
}

void per_radius_csv(const Options& o, std::ostream& out, const std::string& header,
                    const std::function<std::string(double)>& row) {
    std::vector<std::string> rows(o.radii.size());
    parallel_for(rows.size(), o.workers, [&](std::size_t i) { rows[i] = row(o.radii[i]); });
    out << header << '\n';
    for (const auto& r : rows) out << r << '\n';
}

const std::vector<std::pair<std::string, std::function<void(const Options&, Bundle&)>>>& recipes() {
    static const std::vector<std::pair<std::string, std::function<void(const Options&, Bundle&)>>> table = {
        {"fig2", [](const Options& o, Bundle& b) { grid_asymptotic(o, 1, b); }},
        {"fig3", [](const Options& o, Bundle& b) { grid_asymptotic(o, 2, b); }},
        {"fig5", [](const Options& o, Bundle& b) { grid_finite(o, 1, b); }},
        {"fig6", [](const Options& o, Bundle& b) { grid_finite(o, 2, b); }},
        {"covrand",
         [](const Options& base, Bundle& b) {
             Options o = with(base, Scenario::random, Property::k_covered, 100, 1.0, 1);
             b.write("bounds.csv", [&](std::ostream& s) { write_bounds(o, s); },
                     {{"", "lower", "random lower bound: union bound over the virtual lattice"},
                      {"", "upper", "random upper bound: corner/edge/center packing product"}});
             b.write("simulation.csv", [&](std::ostream& s) { write_simulate(o, s, b.progress()); },
                     simulate_columns("random coverage"));
         }},
        {"fig8",
         [](const Options& base, Bundle& b) {
             Options o = with(base, Scenario::random, Property::disconnected, 100, 1.0, 1);
             b.write("asymptotic.csv",
                     [&](std::ostream& s) {
                         per_radius_csv(o, s, "r,asymptotic_disc,provenance", [&](double r) {
                             return format_number(r) + "," + format_number(random_model::asymptotic_disc(o.n, r)) +
                                    ",asymptotic-disconnectivity";
                         });
                     },
                     {{"", "asymptotic_disc", "1 - exp(-n exp(-n pi r^2))"}});
             b.write("simulation.csv", [&](std::ostream& s) { write_simulate(o, s, b.progress()); },
                     simulate_columns("random disconnectivity, p = 1"));
         }},
        {"fig9",
         [](const Options& base, Bundle& b) {
             Options o = with(base, Scenario::random, Property::disconnected, 100, 0.5, 1);
             b.write("terms.csv",
                     [&](std::ostream& s) {
                         per_radius_csv(o, s, "r,a1,a2,a1_error,a2_stderr,provenance", [&](double r) {
                             const DiscEstimate a1 = random_model::disc_estimate(o.n, r, o.p, o.tol);
                             const QuadResult a2 = random_model::isolated_pair_term(o.n, r, o.p, o.pairs, o.seed);
                             return format_number(r) + "," + format_number(a1.raw) + "," + format_number(a2.value) +
                                    "," + format_number(a1.error_estimate) + "," + format_number(a2.error_estimate) +
                                    ",a1:isolated-node-integral|a2:isolated-pair-monte-carlo";
                         });
                     },
                     {{"", "a1", "expected number of isolated nodes (quadrature)"},
                      {"", "a2", "C(n,2) Pr{isolated connected pair} (pair Monte Carlo)"}});
         }},
        {"fig10",
         [](const Options& base, Bundle& b) {
             Options o = with(base, Scenario::random, Property::disconnected, 100, 0.5, 1);
             b.write("bounds.csv", [&](std::ostream& s) { write_bounds(o, s); },
                     {{"", "lower", "a1 - C(n,2) J, pair Monte Carlo"},
                      {"", "upper", "a1 + a2, higher terms dropped"},
                      {"", "estimate", "a1, expected number of isolated nodes"},
                      {"", "baseline", "asymptotic disconnectivity"}});
             b.write("simulation.csv", [&](std::ostream& s) { write_simulate(o, s, b.progress()); },
                     simulate_columns("random disconnectivity, p = 0.5"));
         }},
        {"kconn",
         [](const Options& base, Bundle& b) {
             Options o = with(base, Scenario::random, Property::k_connected, 100, 1.0, 2);
             b.write("estimate.csv",
                     [&](std::ostream& s) {
                         per_radius_csv(o, s, "r,not_k_connected,raw,k,provenance", [&](double r) {
                             const DiscEstimate e = random_model::kdisc_estimate(o.n, r, o.k, o.tol);
                             return format_number(r) + "," + format_number(e.value) + "," + format_number(e.raw) +
                                    "," + std::to_string(o.k) + ",low-degree-integral";
                         });
                     },
                     {{"", "not_k_connected", "expected number of nodes with degree < k (quadrature)"}});
             b.write("simulation.csv", [&](std::ostream& s) { write_simulate(o, s, b.progress()); },
                     simulate_columns("random k-connectivity (success = k-connected)"));
         }},
    };
    return table;
}

}  // namespace

std::vector<std::string> figure_ids() {
    std::vector<std::string> ids;
    for (const auto& [id, fn] : recipes()) ids.push_back(id);
    return ids;
}

void reproduce(const Options& opt, std::ostream* progress) {
    for (const auto& [id, recipe] : recipes()) {
        if (id != opt.figure) continue;
        Options o = opt;
        if (o.radii.empty()) o.radii = expand_range(0.15, 0.45, 0.025);
        Bundle bundle(o.out == "-" ? "reproduce-" + id : o.out, progress);
        recipe(o, bundle);
        bundle.finish();
        return;
    }
    std::string valid;
    for (const auto& id : figure_ids()) valid += (valid.empty() ? "" : ", ") + id;
    throw UsageError("unknown figure id '" + opt.figure + "'; valid ids: " + valid);
}

}  // namespace fwsn::cli
