// Runs the installed command-line tool as a subprocess.
#include <gtest/gtest.h>

#include <json.hpp>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#ifndef EXCON_CLI
#error "EXCON_CLI must name the command-line binary"
#endif

namespace {

struct CliRun {
    int status = -1;
    std::string out;  // stdout and stderr interleaved
};

CliRun run(const std::string& args) {
    const std::string cmd = std::string(EXCON_CLI) + " " + args + " 2>&1";
    CliRun r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
    const int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

std::string data(const char* name) { return std::string(EXCON_TEST_DATA) + "/" + name; }

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "excon_cli_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

nlohmann::ordered_json json_of(const CliRun& r) { return nlohmann::ordered_json::parse(r.out); }

} // namespace

TEST(Cli, UsageErrorsExitTwo) {
    EXPECT_EQ(run("").status, 2);
    EXPECT_EQ(run("frobnicate").status, 2);
    EXPECT_EQ(run("test").status, 2);
    EXPECT_EQ(run("test --data " + data("trial_small.csv") + " --w 1.5").status, 2);
    EXPECT_EQ(run("test --data " + data("trial_small.csv") + " --direction sideways").status, 2);
    EXPECT_EQ(run("--format yaml power-table").status, 2);
}

TEST(Cli, SimulateNeedsSeed) {
    const auto cfg = scratch("unseeded.cfg");
    std::ofstream(cfg) << "columns = t1\ntheta_star = 0\ndelta0 = 0.2\nn1 = 20\n";
    const CliRun r = run("simulate --config " + cfg.string() + " --reps 10");
    EXPECT_EQ(r.status, 2);
    EXPECT_NE(r.out.find("seed"), std::string::npos);
}

TEST(Cli, RuntimeErrorsExitOne) {
    const CliRun missing = run("test --data " + data("missing.csv"));
    EXPECT_EQ(missing.status, 1);
    EXPECT_NE(missing.out.find("excon: error:"), std::string::npos);
    const CliRun bad = run("test --data " + data("external_treated.csv"));
    EXPECT_EQ(bad.status, 1);
    EXPECT_NE(bad.out.find("external_treated.csv:3:"), std::string::npos);
    EXPECT_EQ(run("power-table --config " + data("missing.cfg")).status, 1);
}

TEST(Cli, TestCommandJson) {
    const CliRun r = run("--format json test --data " + data("trial_small.csv") + " --method COMBINED --direction Greater --w auto");
    ASSERT_EQ(r.status, 0) << r.out;
    const auto j = json_of(r);
    EXPECT_EQ(j["command"], "test");
    EXPECT_EQ(j["inputs"]["direction"], "greater");
    EXPECT_TRUE(j["results"].contains("adjusted_p"));
    EXPECT_EQ(run("--format json test --data " + data("trial_small.csv")).out, r.out);
}

TEST(Cli, FormatAfterSubcommand) {
    const CliRun r = run("test --data " + data("trial_small.csv") + " --method t1 --format tsv");
    ASSERT_EQ(r.status, 0) << r.out;
    EXPECT_EQ(r.out.rfind("#excon", 0), 0u);
}

TEST(Cli, TippingBoth) {
    const CliRun r = run("--format json tipping --data " + data("trial_small.csv") + " --method both");
    ASSERT_EQ(r.status, 0) << r.out;
    const auto j = json_of(r);
    EXPECT_TRUE(j["results"].contains("tipping_pooled"));
    EXPECT_TRUE(j["results"].contains("tipping_combined"));
}

TEST(Cli, PowerTableConfigRoundTrip) {
    const CliRun first = run("--format json power-table");
    ASSERT_EQ(first.status, 0) << first.out;
    const auto j = json_of(first);
    ASSERT_EQ(j["tables"][0]["rows"].size(), 48u);
    const auto cfg = scratch("echo.cfg");
    std::ofstream(cfg) << j["config"].get<std::string>();
    const CliRun second = run("--format json power-table --config " + cfg.string());
    ASSERT_EQ(second.status, 0) << second.out;
    EXPECT_EQ(json_of(second)["tables"], j["tables"]);
}

TEST(Cli, Type1TableText) {
    const CliRun r = run("type1-table");
    ASSERT_EQ(r.status, 0) << r.out;
    EXPECT_NE(r.out.find("naiveTc(1/4)"), std::string::npos);
}

TEST(Cli, SimulateIsSeeded) {
    const auto cfg = scratch("sim.cfg");
    std::ofstream(cfg) << "columns = t1, tc\ndelta_star = 0.2\nw = 0.25\ntheta_star = 0\ndelta0 = 0.2\nn1 = 40\n";
    const std::string args = "--format json simulate --config " + cfg.string() + " --reps 200 --seed 9";
    const CliRun a = run(args + " --threads 1");
    const CliRun b = run(args + " --threads 3");
    ASSERT_EQ(a.status, 0) << a.out;
    EXPECT_EQ(a.out, b.out);
}

TEST(Cli, MatchBalanceSubsample) {
    const auto pairs = scratch("pairs.csv");
    const CliRun m = run("match --data " + data("trial_small.csv") + " --pairs-out " + pairs.string());
    ASSERT_EQ(m.status, 0) << m.out;
    std::ifstream in(pairs);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "treated_id,external_id,distance");

    const CliRun b = run("--format json balance --data " + data("trial_small.csv") + " --pairs " + pairs.string());
    ASSERT_EQ(b.status, 0) << b.out;
    EXPECT_EQ(json_of(b)["results"]["n_external_matched"], 40);

    const CliRun s = run("--format json simulate --data " + data("trial_small.csv") + " --pairs " + pairs.string() +
                      " --seed 4 --reps 40 --delta0 0,0.3");
    ASSERT_EQ(s.status, 0) << s.out;
    EXPECT_EQ(json_of(s)["tables"][0]["rows"].size(), 2u);
}

TEST(Cli, BenchmarkOmit) {
    const CliRun r = run("--format json benchmark-omit --data " + data("trial_small.csv") + " --covariates age,bmi");
    ASSERT_EQ(r.status, 0) << r.out;
    EXPECT_EQ(json_of(r)["tables"][0]["rows"].size(), 3u);
    EXPECT_EQ(run("benchmark-omit --data " + data("trial_small.csv") + " --covariates height").status, 1);
}
