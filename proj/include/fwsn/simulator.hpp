#pragma once

// Seeded Monte Carlo ground truth for grid and random deployments.

#include "fwsn/geometry.hpp"
#include "fwsn/grid_model.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fwsn {

enum class Scenario : std::uint8_t { grid, random };
enum class Property : std::uint8_t { connected, k_connected, k_covered, disconnected };

struct SimSpec {
    Scenario scenario = Scenario::grid;
    Property property = Property::k_covered;
    std::uint64_t n = 0;
    double p = 1.0;  // activation probability (grid) or link probability (random)
    double r = 0.0;
    unsigned k = 1;
};

struct SimResult {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double estimate = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::uint64_t seed = 0;
    std::string label;
};

struct EstimateOptions {
    unsigned workers = 0;  // 0 = FWSN_WORKERS or hardware concurrency
    // When set, completed blocks of kCheckpointBlock trials are recorded here
    // and reused by a later call with the same spec, trial count and seed.
    std::string checkpoint_path;
    std::function<void(std::uint64_t done, std::uint64_t total)> progress;
};

inline constexpr std::uint64_t kCheckpointBlock = 10'000;
inline constexpr double kZ95 = 1.959963984540054;
inline constexpr double kZ99 = 2.5758293035489004;

struct Interval {
    double low = 0.0;
    double high = 0.0;
};

namespace sim {

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kZ95);

std::string_view scenario_name(Scenario s);
std::string_view property_name(Property p);
std::optional<Scenario> parse_scenario(std::string_view text);
std::optional<Property> parse_property(std::string_view text);

// Lattice indices (row-major) of the sensors that are active in one draw.
std::vector<std::uint32_t> sample_grid_active_indices(std::uint64_t n, double p, std::uint64_t seed);
std::vector<Point> sample_grid_activation(const GridSpec& spec, std::uint64_t seed);
std::vector<Point> sample_uniform_nodes(std::uint64_t n, std::uint64_t seed);

// Throws PreconditionError when the spec is outside the simulator's domain.
void validate(const SimSpec& spec);

// Outcome of one trial; the same trial seed gives the same deployment, and
// the same link coins, at every radius.
bool run_trial(const SimSpec& spec, std::uint64_t trial_seed);

// Trial i uses derive_seed(master_seed, i).
SimResult estimate_probability(const SimSpec& spec, std::uint64_t trials, std::uint64_t master_seed,
                               const EstimateOptions& options = {});

}  // namespace sim
}  // namespace fwsn
