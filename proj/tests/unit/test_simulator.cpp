#include "fwsn/error.hpp"
#include "fwsn/rng.hpp"
#include "fwsn/simulator.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

using namespace fwsn;

namespace {

EstimateOptions with_workers(unsigned w) {
    EstimateOptions o;
    o.workers = w;
    return o;
}

EstimateOptions with_checkpoint(const std::string& path) {
    EstimateOptions o;
    o.checkpoint_path = path;
    return o;
}

}  // namespace

TEST_CASE("grid activation sampling") {
    CHECK(sim::sample_grid_active_indices(100, 0.0, 5).empty());
    CHECK(sim::sample_grid_active_indices(100, 1.0, 5).size() == 100);
    CHECK(sim::sample_grid_activation({100, 1.0, 0.1}, 5).size() == 100);
    CHECK(sim::sample_grid_active_indices(49, 0.3, 9) == sim::sample_grid_active_indices(49, 0.3, 9));

    // mean active count over many draws
    double total = 0;
    const int draws = 4000;
    for (int i = 0; i < draws; ++i) total += static_cast<double>(sim::sample_grid_active_indices(100, 0.2, derive_seed(1, i)).size());
    const double mean = total / draws;
    CHECK(std::abs(mean - 20.0) < 4 * std::sqrt(16.0 / draws));

    // activation at a smaller p is a subset of activation at a larger p
    const auto lo = sim::sample_grid_active_indices(100, 0.2, 3);
    const auto hi = sim::sample_grid_active_indices(100, 0.5, 3);
    CHECK(std::includes(hi.begin(), hi.end(), lo.begin(), lo.end()));
}

TEST_CASE("uniform nodes pass a Kolmogorov-Smirnov test per coordinate") {
    const auto pts = sim::sample_uniform_nodes(20000, 42);
    for (int axis = 0; axis < 2; ++axis) {
        std::vector<double> v;
        for (const Point& p : pts) v.push_back((axis ? p.y : p.x) + 0.5);
        std::sort(v.begin(), v.end());
        CHECK(v.front() >= 0.0);
        CHECK(v.back() < 1.0);
        double d = 0;
        const auto n = static_cast<double>(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            d = std::max({d, (i + 1) / n - v[i], v[i] - i / n});
        }
        // 1% critical value 1.628 / sqrt(n)
        CHECK(d < 1.628 / std::sqrt(n));
    }
}

TEST_CASE("validation") {
    CHECK_THROWS_AS(sim::validate({Scenario::grid, Property::k_covered, 7, 0.5, 0.1, 1}), PreconditionError);
    CHECK_THROWS_AS(sim::validate({Scenario::grid, Property::k_covered, 9, 1.5, 0.1, 1}), PreconditionError);
    CHECK_THROWS_AS(sim::validate({Scenario::random, Property::connected, 9, 0.0, 0.1, 1}), PreconditionError);
    CHECK_THROWS_AS(sim::validate({Scenario::random, Property::k_connected, 9, 1.0, 0.1, 0}), PreconditionError);
    CHECK_THROWS_AS(sim::validate({Scenario::random, Property::k_covered, 9, 1.0, 0.0, 1}), PreconditionError);
    CHECK_NOTHROW(sim::validate({Scenario::random, Property::connected, 9, 1.0, 0.0, 1}));
    CHECK(sim::parse_property("k-covered") == Property::k_covered);
    CHECK_FALSE(sim::parse_property("covered").has_value());
    CHECK(sim::parse_scenario("random") == Scenario::random);
}

TEST_CASE("deterministic trials") {
    const SimSpec spec{Scenario::random, Property::connected, 60, 0.8, 0.2, 1};
    const SimResult a = sim::estimate_probability(spec, 2500, 9, with_workers(1));
    const SimResult b = sim::estimate_probability(spec, 2500, 9, with_workers(4));
    CHECK(a.successes == b.successes);
    CHECK(a.label == "simulation:random:connected");
    CHECK(a.seed == 9);
    const SimResult c = sim::estimate_probability(spec, 2500, 10, with_workers(1));
    CHECK(c.trials == 2500);
    CHECK(a.ci_low <= a.estimate);
    CHECK(a.estimate <= a.ci_high);
}

TEST_CASE("degenerate outcomes") {
    const SimResult none = sim::estimate_probability({Scenario::grid, Property::k_covered, 100, 0.0, 0.3, 1}, 100, 1);
    CHECK(none.successes == 0);
    CHECK(none.ci_low == 0.0);
    const SimResult all = sim::estimate_probability({Scenario::grid, Property::k_covered, 100, 1.0, 0.08, 1}, 100, 1);
    CHECK(all.successes == 100);
    CHECK(all.ci_high == 1.0);
    const SimResult one = sim::estimate_probability({Scenario::grid, Property::connected, 100, 1.0, 0.1, 1}, 1, 1);
    CHECK(one.trials == 1);
    CHECK(one.estimate == 1.0);
}

TEST_CASE("Wilson interval") {
    const Interval ci = sim::wilson_interval(50, 100);
    CHECK(ci.low == doctest::Approx(0.4038).epsilon(1e-3));
    CHECK(ci.high == doctest::Approx(0.5962).epsilon(1e-3));
    const Interval zero = sim::wilson_interval(0, 10);
    CHECK(zero.low == 0.0);
    CHECK(zero.high > 0.2);
    CHECK(sim::wilson_interval(30, 100, kZ99).low < sim::wilson_interval(30, 100).low);

    // empirical coverage for a known p
    const double p = 0.3;
    int hits = 0;
    const int reps = 2000;
    for (int rep = 0; rep < reps; ++rep) {
        SplitMix64 rng(derive_seed(77, rep));
        std::uint64_t s = 0;
        for (int i = 0; i < 200; ++i) s += rng.uniform() < p;
        const Interval w = sim::wilson_interval(s, 200);
        hits += w.low <= p && p <= w.high;
    }
    CHECK(hits >= reps * 93 / 100);
}

TEST_CASE("coupled trials are monotone and piecewise constant in r") {
    SimSpec cover{Scenario::grid, Property::k_covered, 100, 0.4, 0.1, 1};
    SimSpec conn{Scenario::random, Property::connected, 80, 0.7, 0.1, 1};
    SimSpec grid_conn{Scenario::grid, Property::connected, 100, 0.7, 0.1, 1};
    for (std::uint64_t t = 0; t < 60; ++t) {
        const std::uint64_t seed = derive_seed(5, t);
        for (SimSpec* spec : {&cover, &conn, &grid_conn}) {
            bool prev = false;
            for (double r = 0.05; r <= 0.5; r += 0.01) {
                spec->r = r;
                const bool now = sim::run_trial(*spec, seed);
                CHECK((!prev || now));
                prev = now;
            }
        }
        // grid connectivity only changes at lattice distances
        grid_conn.r = 0.1;
        const bool at = sim::run_trial(grid_conn, seed);
        grid_conn.r = 0.14;
        CHECK(sim::run_trial(grid_conn, seed) == at);
        grid_conn.r = 0.1 - 1e-9;
        CHECK_FALSE(sim::run_trial(grid_conn, seed));
    }
}

TEST_CASE("checkpoint resume") {
    const auto dir = std::filesystem::temp_directory_path() / "fwsn-checkpoint-test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "run.ckpt").string();
    const SimSpec spec{Scenario::grid, Property::k_covered, 100, 0.3, 0.2, 1};
    const std::uint64_t trials = 25'000;

    const SimResult plain = sim::estimate_probability(spec, trials, 3);
    const SimResult first = sim::estimate_probability(spec, trials, 3, with_checkpoint(path));
    CHECK(first.successes == plain.successes);
    REQUIRE(std::filesystem::exists(path));

    // a resumed run reads the recorded blocks instead of recomputing them
    std::string text;
    {
        std::ifstream in(path);
        text.assign(std::istreambuf_iterator<char>(in), {});
    }
    const auto pos = text.find("block 0 ");
    REQUIRE(pos != std::string::npos);
    const auto eol = text.find('\n', pos);
    text.replace(pos, eol - pos, "block 0 0");
    {
        std::ofstream out(path, std::ios::trunc);
        out << text;
    }
    std::uint64_t reported_start = 1;
    EstimateOptions opts = with_checkpoint(path);
    opts.progress = [&](std::uint64_t done, std::uint64_t) {
        if (reported_start == 1) reported_start = done;
    };
    const SimResult resumed = sim::estimate_probability(spec, trials, 3, opts);
    CHECK(reported_start == trials);
    const SimResult block0 = sim::estimate_probability(spec, kCheckpointBlock, 3);
    CHECK(resumed.successes == plain.successes - block0.successes);

    // a checkpoint from another run is rejected
    CHECK_THROWS_AS(sim::estimate_probability(spec, trials, 4, with_checkpoint(path)), PreconditionError);
    std::filesystem::remove_all(dir);
}
