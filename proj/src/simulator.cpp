#include "fwsn/simulator.hpp"

#include "fwsn/coverage.hpp"
#include "fwsn/error.hpp"
#include "fwsn/graph.hpp"
#include "fwsn/parallel.hpp"
#include "fwsn/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>

namespace fwsn::sim {
namespace {

constexpr std::uint64_t kLinkStream = 0x6c696e6b;
constexpr const char* kCheckpointMagic = "fwsn-checkpoint 1";

std::string spec_signature(const SimSpec& spec, std::uint64_t trials, std::uint64_t seed) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s %s n=%llu p=%.17g r=%.17g k=%u trials=%llu seed=%llu",
                  std::string(scenario_name(spec.scenario)).c_str(),
                  std::string(property_name(spec.property)).c_str(),
                  static_cast<unsigned long long>(spec.n), spec.p, spec.r, spec.k,
                  static_cast<unsigned long long>(trials), static_cast<unsigned long long>(seed));
    return buf;
}

using BlockCounts = std::map<std::uint64_t, std::uint64_t>;

BlockCounts load_checkpoint(const std::string& path, const std::string& signature) {
    BlockCounts done;
    std::ifstream in(path);
    if (!in) return done;
    std::string line;
    if (!std::getline(in, line) || line != kCheckpointMagic) {
        throw PreconditionError("checkpoint " + path + " is not a simulation checkpoint");
    }
    if (!std::getline(in, line) || line != "spec " + signature) {
        throw PreconditionError("checkpoint " + path + " belongs to a different run");
    }
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::string tag;
        std::uint64_t block = 0, successes = 0;
        if (row >> tag >> block >> successes && tag == "block") done[block] = successes;
    }
    return done;
}

void save_checkpoint(const std::string& path, const std::string& signature, const BlockCounts& done) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write checkpoint " + tmp);
        out << kCheckpointMagic << '\n' << "spec " << signature << '\n';
        for (const auto& [block, successes] : done) out << "block " << block << ' ' << successes << '\n';
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
    require(trials > 0 && successes <= trials, "wilson_interval: need 0 <= successes <= trials, trials > 0");
    const auto n = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (phat + z2 / (2.0 * n)) / denom;
    const double half = z / denom * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
    Interval ci{std::clamp(center - half, 0.0, 1.0), std::clamp(center + half, 0.0, 1.0)};
    if (successes == 0) ci.low = 0.0;
    if (successes == trials) ci.high = 1.0;
    ci.low = std::min(ci.low, phat);
    ci.high = std::max(ci.high, phat);
    return ci;
}

std::string_view scenario_name(Scenario s) { return s == Scenario::grid ? "grid" : "random"; }

std::string_view property_name(Property p) {
    switch (p) {
        case Property::connected: return "connected";
        case Property::k_connected: return "k-connected";
        case Property::k_covered: return "k-covered";
        case Property::disconnected: return "disconnected";
    }
    return "?";
}

std::optional<Scenario> parse_scenario(std::string_view text) {
    if (text == "grid") return Scenario::grid;
    if (text == "random") return Scenario::random;
    return std::nullopt;
}

std::optional<Property> parse_property(std::string_view text) {
    for (Property p : {Property::connected, Property::k_connected, Property::k_covered, Property::disconnected}) {
        if (text == property_name(p)) return p;
    }
    return std::nullopt;
}

std::vector<std::uint32_t> sample_grid_active_indices(std::uint64_t n, double p, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<std::uint32_t> active;
    for (std::uint64_t i = 0; i < n; ++i) {
        if (rng.uniform() < p) active.push_back(static_cast<std::uint32_t>(i));
    }
    return active;
}

std::vector<Point> sample_grid_activation(const GridSpec& spec, std::uint64_t seed) {
    require(spec.p >= 0.0 && spec.p <= 1.0, "p must lie in [0, 1]");
    const std::vector<Point> lattice = grid::grid_positions(spec.n);
    std::vector<Point> out;
    for (std::uint32_t i : sample_grid_active_indices(spec.n, spec.p, seed)) out.push_back(lattice[i]);
    return out;
}

std::vector<Point> sample_uniform_nodes(std::uint64_t n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<Point> out(n);
    for (Point& pt : out) {
        pt.x = rng.uniform() - 0.5;
        pt.y = rng.uniform() - 0.5;
    }
    return out;
}

void validate(const SimSpec& spec) {
    require(spec.n >= 1 && spec.n < std::numeric_limits<std::uint32_t>::max(), "n must be in [1, 2^32)");
    if (spec.scenario == Scenario::grid) {
        grid::side(spec.n);
        require(spec.p >= 0.0 && spec.p <= 1.0, "grid activation probability p must lie in [0, 1]");
    } else {
        require(spec.p > 0.0 && spec.p <= 1.0, "link probability p must lie in (0, 1]");
    }
    require(std::isfinite(spec.r) && spec.r >= 0.0, "radius must be a finite nonnegative number");
    require(spec.k >= 1, "k must be >= 1");
    if (spec.property == Property::k_covered) require(spec.r > 0.0, "coverage needs r > 0");
}

bool run_trial(const SimSpec& spec, std::uint64_t trial_seed) {
    if (spec.scenario == Scenario::grid) {
        const std::vector<std::uint32_t> active = sample_grid_active_indices(spec.n, spec.p, trial_seed);
        if (spec.property == Property::k_covered) {
            const std::vector<Point> lattice = grid::grid_positions(spec.n);
            std::vector<Point> pts;
            pts.reserve(active.size());
            for (std::uint32_t i : active) pts.push_back(lattice[i]);
            return coverage::is_k_covered(pts, spec.r, spec.k);
        }
        const Graph g = graph::build_lattice_graph(spec.n, active, spec.r);
        switch (spec.property) {
            case Property::connected: return graph::is_connected(g);
            case Property::disconnected: return !graph::is_connected(g);
            default: return graph::vertex_connectivity_at_least(g, spec.k);
        }
    }

    std::vector<Point> nodes = sample_uniform_nodes(spec.n, trial_seed);
    if (spec.property == Property::k_covered) return coverage::is_k_covered(nodes, spec.r, spec.k);
    const std::uint64_t link_seed = derive_seed(trial_seed, kLinkStream);
    if (spec.property == Property::connected || spec.property == Property::disconnected) {
        return graph::geometric_graph_connected(nodes, spec.r, spec.p, link_seed) == (spec.property == Property::connected);
    }
    const Graph g = graph::build_geometric_graph(std::move(nodes), spec.r, spec.p, link_seed);
    return graph::vertex_connectivity_at_least(g, spec.k);
}

SimResult estimate_probability(const SimSpec& spec, std::uint64_t trials, std::uint64_t master_seed,
                               const EstimateOptions& options) {
    validate(spec);
    require(trials >= 1, "trials must be >= 1");

    const std::uint64_t blocks = (trials + kCheckpointBlock - 1) / kCheckpointBlock;
    const std::string signature = spec_signature(spec, trials, master_seed);
    const bool checkpointing = !options.checkpoint_path.empty();
    BlockCounts done = checkpointing ? load_checkpoint(options.checkpoint_path, signature) : BlockCounts{};

    std::vector<std::uint64_t> pending;
    std::uint64_t finished_trials = 0;
    for (std::uint64_t b = 0; b < blocks; ++b) {
        if (done.contains(b)) {
            finished_trials += std::min(trials, (b + 1) * kCheckpointBlock) - b * kCheckpointBlock;
        } else {
            pending.push_back(b);
        }
    }

    std::mutex mutex;
    if (options.progress) options.progress(finished_trials, trials);
    parallel_for(pending.size(), options.workers, [&](std::size_t idx) {
        const std::uint64_t b = pending[idx];
        const std::uint64_t begin = b * kCheckpointBlock;
        const std::uint64_t end = std::min(trials, begin + kCheckpointBlock);
        std::uint64_t successes = 0;
        for (std::uint64_t t = begin; t < end; ++t) {
            successes += run_trial(spec, derive_seed(master_seed, t)) ? 1 : 0;
        }
        std::lock_guard lock(mutex);
        done[b] = successes;
        finished_trials += end - begin;
        if (checkpointing) save_checkpoint(options.checkpoint_path, signature, done);
        if (options.progress) options.progress(finished_trials, trials);
    });

    SimResult result;
    result.trials = trials;
    for (const auto& [block, successes] : done) result.successes += successes;
    result.estimate = static_cast<double>(result.successes) / static_cast<double>(trials);
    const Interval ci = wilson_interval(result.successes, trials);
    result.ci_low = ci.low;
    result.ci_high = ci.high;
    result.seed = master_seed;
    result.label = "simulation:" + std::string(scenario_name(spec.scenario)) + ":" +
                   std::string(property_name(spec.property));
    return result;
}

}  // namespace fwsn::sim
