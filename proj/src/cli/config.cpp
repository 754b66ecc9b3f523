#include "fwsn/cli.hpp"

#include "fwsn/error.hpp"
#include "fwsn/parallel.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fwsn::cli {

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string format_optional(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

std::vector<double> expand_range(double start, double stop, double step) {
    if (!(step > 0.0) || !std::isfinite(step)) throw UsageError("--r-step must be positive");
    if (!std::isfinite(start) || !std::isfinite(stop) || stop < start) {
        throw UsageError("empty sweep range: --r-stop must be >= --r-start");
    }
    const auto count = static_cast<std::uint64_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count > 1'000'000) throw UsageError("sweep range has more than 10^6 points");
    std::vector<double> out;
    out.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        out.push_back(std::strtod(format_number(start + static_cast<double>(i) * step).c_str(), nullptr));
    }
    return out;
}

std::optional<Options> parse_options(int argc, const char* const* argv, std::ostream& help_out) {
    Options opt;
    std::string scenario = "grid";
    std::string property = "k-covered";
    std::vector<double> r_list;
    std::optional<double> r_start, r_stop;
    double r_step = 0.01;
    std::uint64_t l = 0;

    CLI::App app{"Coverage and connectivity bounds for finite wireless sensor networks", "fwsn"};
    app.set_config("--config", "", "flat key=value file, keys named like the flags");
    app.require_subcommand(1, 1);
    app.fallthrough();

    app.add_option("--scenario", scenario, "grid | random")->check(CLI::IsMember({"grid", "random"}));
    app.add_option("--property", property, "k-covered | connected | k-connected | disconnected")
        ->check(CLI::IsMember({"k-covered", "connected", "k-connected", "disconnected"}));
    app.add_option("--n", opt.n, "node count");
    app.add_option("--p", opt.p, "activation (grid) or link (random) probability");
    app.add_option("--k", opt.k, "coverage / connectivity order")->check(CLI::PositiveNumber);
    app.add_option("--r", r_list, "explicit radii, comma separated")->delimiter(',');
    app.add_option("--r-start", r_start, "sweep start");
    app.add_option("--r-stop", r_stop, "sweep stop (inclusive)");
    app.add_option("--r-step", r_step, "sweep step");
    app.add_option("--l", l, "virtual grid size (perfect square); default gives r' >= r/2");
    app.add_option("--trials", opt.trials, "Monte Carlo trials per sweep point");
    app.add_option("--seed", opt.seed, "master seed");
    app.add_option("--tol", opt.tol, "absolute quadrature tolerance");
    app.add_option("--pairs", opt.pairs, "Monte Carlo pairs for double integrals");
    app.add_option("--eps", opt.eps, "epsilon of the asymptotic coverage thresholds");
    app.add_option("--out", opt.out, "output file, '-' for stdout (reproduce: directory)");
    app.add_option("--checkpoint", opt.checkpoint, "checkpoint file prefix for simulate");
    app.add_flag("--quiet", opt.quiet, "no progress on stderr");

    app.add_subcommand("bounds", "analytic bounds per sweep point");
    app.add_subcommand("simulate", "Monte Carlo estimates per sweep point");
    app.add_subcommand("breakpoints", "radii where grid properties can change");
    auto* repro = app.add_subcommand("reproduce", "CSV bundle for one figure");
    repro->add_option("figure", opt.figure, "figure id")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        help_out << app.help();
        return std::nullopt;
    } catch (const CLI::CallForAllHelp& e) {
        help_out << app.help("", CLI::AppFormatMode::All);
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    opt.command = app.get_subcommands().front()->get_name();
    opt.scenario = *sim::parse_scenario(scenario);
    opt.property = *sim::parse_property(property);
    if (l != 0) opt.l = l;
    if (opt.trials == 0) throw UsageError("--trials must be >= 1");
    if (!(opt.tol > 0.0)) throw UsageError("--tol must be positive");
    if (opt.pairs == 0) throw UsageError("--pairs must be >= 1");

    if (!r_list.empty()) {
        if (r_start || r_stop) throw UsageError("give either --r or --r-start/--r-stop, not both");
        opt.radii = r_list;
    } else if (r_start || r_stop) {
        if (!r_start || !r_stop) throw UsageError("--r-start and --r-stop go together");
        opt.radii = expand_range(*r_start, *r_stop, r_step);
    }
    opt.workers = default_workers();
    return opt;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    try {
        const std::optional<Options> parsed = parse_options(argc, argv, out);
        if (!parsed) return kExitOk;
        const Options& opt = *parsed;
        std::ostream* progress = opt.quiet ? nullptr : &err;

        if (opt.command == "reproduce") {
            reproduce(opt, progress);
            return kExitOk;
        }
        if (opt.command != "breakpoints" && opt.radii.empty()) {
            throw UsageError("no radii: pass --r or --r-start/--r-stop");
        }

        std::ostringstream csv;
        if (opt.command == "bounds") write_bounds(opt, csv);
        else if (opt.command == "simulate") write_simulate(opt, csv, progress);
        else write_breakpoints(opt, csv);

        if (opt.out == "-") {
            out << csv.str();
        } else {
            std::ofstream file(opt.out, std::ios::binary | std::ios::trunc);
            if (!file) throw std::runtime_error("cannot open " + opt.out + " for writing");
            file << csv.str();
        }
        return kExitOk;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const PreconditionError& e) {
        err << "precondition violated: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const ConvergenceError& e) {
        err << "did not converge: " << e.what() << " (achieved error " << format_number(e.achieved_error()) << ")\n";
        return kExitNonConvergence;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

}  // namespace fwsn::cli
