#include "fwsn/cli.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace fwsn;

namespace {

struct Outcome {
    int code = 0;
    std::string out;
    std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "fwsn");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::vector<std::string> fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

TEST_CASE("range expansion") {
    const auto r = cli::expand_range(0.15, 0.45, 0.01);
    REQUIRE(r.size() == 31);
    CHECK(r.front() == 0.15);
    CHECK(r[10] == 0.25);
    CHECK(r.back() == 0.45);
    CHECK(cli::expand_range(0.2, 0.2, 0.01).size() == 1);
    CHECK_THROWS_AS(cli::expand_range(0.3, 0.2, 0.01), cli::UsageError);
    CHECK_THROWS_AS(cli::expand_range(0.1, 0.2, 0.0), cli::UsageError);
    CHECK(cli::format_number(0.1 + 0.2) == "0.3");
    CHECK(cli::format_optional(std::nullopt).empty());
}

TEST_CASE("grid bounds sweep") {
    const Outcome o = run_cli({"bounds", "--scenario", "grid", "--n", "100", "--p", "0.2", "--r-start", "0.15",
                               "--r-stop", "0.45", "--r-step", "0.01", "--quiet"});
    REQUIRE(o.code == 0);
    const auto ls = lines(o.out);
    REQUIRE(ls.size() == 32);
    CHECK(ls[0] == cli::kBoundsHeader);
    for (std::size_t i = 1; i < ls.size(); ++i) {
        const auto f = fields(ls[i]);
        REQUIRE(f.size() == 8);
        CHECK(!f[1].empty());
        CHECK(!f[2].empty());
        CHECK(std::stod(f[1]) <= std::stod(f[2]));
        CHECK(std::stod(f[5]) == doctest::Approx(0.207149).epsilon(1e-5));
        CHECK(std::stod(f[6]) == doctest::Approx(0.229012).epsilon(1e-5));
        CHECK(f[7].find("lower:") != std::string::npos);
    }
}

TEST_CASE("usage errors") {
    CHECK(run_cli({"bounds", "--r-start", "0.3", "--r-stop", "0.2", "--quiet"}).code == cli::kExitUsage);
    CHECK(run_cli({"breakpoints", "--n", "7"}).code == cli::kExitUsage);
    CHECK(run_cli({"bounds", "--quiet"}).code == cli::kExitUsage);
    CHECK(run_cli({"bounds", "--r", "0.2", "--r-start", "0.1", "--r-stop", "0.3"}).code == cli::kExitUsage);
    CHECK(run_cli({"simulate", "--trials", "0", "--r", "0.2"}).code == cli::kExitUsage);
    CHECK(run_cli({"frobnicate"}).code == cli::kExitUsage);
    CHECK(run_cli({"bounds", "--property", "covered", "--r", "0.2"}).code == cli::kExitUsage);
    CHECK(run_cli({"bounds", "--scenario", "grid", "--property", "connected", "--r", "0.2"}).code ==
          cli::kExitPrecondition);
    CHECK(run_cli({"bounds", "--scenario", "grid", "--n", "99", "--r", "0.2"}).code == cli::kExitPrecondition);
    const Outcome unknown = run_cli({"reproduce", "fig99", "--out", "unused"});
    CHECK(unknown.code == cli::kExitUsage);
    for (const auto& id : cli::figure_ids()) CHECK(unknown.err.find(id) != std::string::npos);
    CHECK(run_cli({"--help"}).code == cli::kExitOk);
}

TEST_CASE("breakpoints output") {
    const Outcome o = run_cli({"breakpoints", "--n", "9"});
    REQUIRE(o.code == 0);
    const auto ls = lines(o.out);
    REQUIRE(ls.size() == 5);
    CHECK(ls[0] == cli::kBreakpointsHeader);
    CHECK(ls[1] == "1,0.333333333333,1,lattice-distance");
    CHECK(ls[4].find("first-beyond-half-diagonal") != std::string::npos);
}

TEST_CASE("simulate output is byte-deterministic") {
    const std::vector<std::string> args{"simulate", "--scenario", "random", "--property", "connected", "--n", "50",
                                        "--p", "1", "--r", "0.2,0.3", "--trials", "300", "--seed", "17", "--quiet"};
    const Outcome a = run_cli(args);
    const Outcome b = run_cli(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    const auto ls = lines(a.out);
    REQUIRE(ls.size() == 3);
    CHECK(ls[0] == cli::kSimulateHeader);
    const auto f = fields(ls[1]);
    REQUIRE(f.size() == 8);
    CHECK(f[1] == "300");
    CHECK(f[6] == "17");
    CHECK(f[7] == "simulation:random:connected");

    const Outcome single = run_cli({"simulate", "--r", "0.3", "--trials", "1", "--quiet"});
    REQUIRE(single.code == 0);
    CHECK(fields(lines(single.out)[1])[1] == "1");

    const Outcome noisy = run_cli({"simulate", "--r", "0.3", "--trials", "100"});
    CHECK(noisy.err.find("100/100") != std::string::npos);
}

TEST_CASE("config file precedence") {
    const auto dir = std::filesystem::temp_directory_path() / "fwsn-cli-test";
    std::filesystem::create_directories(dir);
    const auto cfg = (dir / "run.ini").string();
    {
        std::ofstream out(cfg);
        out << "scenario=grid\nn=49\np=0.5\nr-start=0.2\nr-stop=0.3\nr-step=0.05\n";
    }
    const Outcome from_file = run_cli({"bounds", "--config", cfg, "--quiet"});
    REQUIRE(from_file.code == 0);
    CHECK(lines(from_file.out).size() == 4);
    const Outcome flags = run_cli({"bounds", "--scenario", "grid", "--n", "49", "--p", "0.5", "--r", "0.2,0.25,0.3",
                                   "--quiet"});
    CHECK(from_file.out == flags.out);
    const Outcome override = run_cli({"bounds", "--config", cfg, "--n", "100", "--quiet"});
    const Outcome direct = run_cli({"bounds", "--n", "100", "--p", "0.5", "--r", "0.2,0.25,0.3", "--quiet"});
    CHECK(override.out == direct.out);
    CHECK(override.out != from_file.out);

    const auto file_out = (dir / "b.csv").string();
    CHECK(run_cli({"bounds", "--config", cfg, "--out", file_out, "--quiet"}).code == 0);
    std::ifstream in(file_out);
    const std::string text((std::istreambuf_iterator<char>(in)), {});
    CHECK(text == from_file.out);
    std::filesystem::remove_all(dir);
}

TEST_CASE("random bounds columns") {
    const Outcome cov = run_cli({"bounds", "--scenario", "random", "--property", "k-covered", "--n", "100", "--r",
                                 "0.25", "--quiet"});
    REQUIRE(cov.code == 0);
    auto f = fields(lines(cov.out)[1]);
    CHECK(std::stod(f[1]) <= std::stod(f[2]));
    CHECK(!f[5].empty());

    const Outcome disc = run_cli({"bounds", "--scenario", "random", "--property", "disconnected", "--n", "100",
                                  "--p", "1", "--r", "0.2", "--pairs", "100000", "--quiet"});
    REQUIRE(disc.code == 0);
    f = fields(lines(disc.out)[1]);
    CHECK(std::stod(f[1]) <= std::stod(f[3]));
    CHECK(std::stod(f[3]) <= std::stod(f[2]));
    CHECK(!f[4].empty());

    const Outcome kc = run_cli({"bounds", "--scenario", "random", "--property", "k-connected", "--k", "2", "--n",
                                "100", "--r", "0.25", "--quiet"});
    REQUIRE(kc.code == 0);
    f = fields(lines(kc.out)[1]);
    CHECK(f[1].empty());
    CHECK(!f[3].empty());
    CHECK(run_cli({"bounds", "--scenario", "random", "--property", "k-connected", "--p", "0.5", "--r", "0.25"}).code ==
          cli::kExitPrecondition);
}

TEST_CASE("reproduce writes a bundle with a manifest") {
    const auto dir = std::filesystem::temp_directory_path() / "fwsn-repro-test";
    std::filesystem::remove_all(dir);
    const Outcome o = run_cli({"reproduce", "fig5", "--out", dir.string(), "--trials", "200", "--quiet"});
    REQUIRE(o.code == 0);
    CHECK(std::filesystem::exists(dir / "manifest.csv"));
    std::size_t csvs = 0;
    for (const auto& e : std::filesystem::directory_iterator(dir)) csvs += e.path().extension() == ".csv";
    CHECK(csvs >= 3);
    std::filesystem::remove_all(dir);
}
