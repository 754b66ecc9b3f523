#pragma once

// Command-line front end: option handling and the CSV writers behind the
// bounds, simulate, breakpoints and reproduce subcommands.

#include "fwsn/simulator.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fwsn::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitUsage = 2,
    kExitPrecondition = 3,
    kExitNonConvergence = 4,
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string command;
    Scenario scenario = Scenario::grid;
    Property property = Property::k_covered;
    std::uint64_t n = 100;
    double p = 1.0;
    unsigned k = 1;
    std::optional<std::uint64_t> l;
    std::vector<double> radii;
    std::uint64_t trials = 10'000;
    std::uint64_t seed = 1;
    double tol = 1e-6;
    std::uint64_t pairs = 1'000'000;
    double eps = 0.1;
    std::string out = "-";
    std::string checkpoint;
    std::string figure;
    bool quiet = false;
    unsigned workers = 0;
};

// Parses argv (flags override --config, which overrides defaults). Throws
// UsageError on malformed input; returns nullopt after printing --help.
std::optional<Options> parse_options(int argc, const char* const* argv, std::ostream& help_out);

// start, start + step, ... up to stop inclusive; values snapped to 12
// significant digits so 0.15 + 2 * 0.05 prints and compares as 0.25.
std::vector<double> expand_range(double start, double stop, double step);

// %.12g, the fixed CSV number format.
std::string format_number(double v);
std::string format_optional(const std::optional<double>& v);

inline constexpr const char* kBoundsHeader = "r,lower,upper,estimate,baseline,klb_r_low,klb_r_high,provenance";
inline constexpr const char* kSimulateHeader = "r,trials,successes,estimate,ci_low,ci_high,seed,provenance";
inline constexpr const char* kBreakpointsHeader = "index,value,lattice_sq,provenance";

BoundReport bound_row(const Options& opt, double r);

void write_bounds(const Options& opt, std::ostream& out);
void write_simulate(const Options& opt, std::ostream& out, std::ostream* progress);
void write_breakpoints(const Options& opt, std::ostream& out);

std::vector<std::string> figure_ids();
// Writes the CSV bundle for one figure into opt.out (a directory) plus a
// manifest.csv naming the source of every column.
void reproduce(const Options& opt, std::ostream* progress);

// Full entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fwsn::cli
