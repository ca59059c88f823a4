#include "geoflow/cli.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace geoflow;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("geoflow_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int run_cli(const fs::path& out, const std::string& args) {
    const std::string cmd =
        "GEOFLOW_OUT='" + out.string() + "' '" GEOFLOW_CLI_PATH "' " + args + " > '" + (out / "stdout.txt").string() + "' 2>&1";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

} // namespace

TEST(Config, TextRoundTrip) {
    RunConfig c;
    c.family = "ga";
    c.A = 0.25;
    c.a = -0.1;
    c.n = 128;
    c.dt = 2.5e-3;
    c.ic = "bump:0.1:0.2";
    c.seed = 99;
    c.eps = "0.3,0.15";
    EXPECT_EQ(RunConfig::from_text(c.to_text()), c);
    for (const auto& k : RunConfig::keys()) EXPECT_NO_THROW(c.get(k));
}

TEST(Config, CommentsOverridesAndBase) {
    RunConfig base;
    base.n = 64;
    const RunConfig c = RunConfig::from_text("# comment\n\n dt = 0.01 \nT=0.5\ndt=0.002\n", base);
    EXPECT_EQ(c.n, 64u);
    EXPECT_DOUBLE_EQ(c.dt, 0.002);
    EXPECT_DOUBLE_EQ(c.T, 0.5);
}

TEST(Config, RejectsBadInput) {
    EXPECT_THROW(RunConfig::from_text("bogus = 1\n"), InvalidArgument);
    EXPECT_THROW(RunConfig::from_text("n 12\n"), InvalidArgument);
    EXPECT_THROW(RunConfig::from_text("n = 12x\n"), InvalidArgument);
    EXPECT_THROW(RunConfig::from_text("dt = nan\n"), InvalidArgument);
    EXPECT_THROW(RunConfig::from_file("/nonexistent/geoflow.cfg"), InvalidArgument);
    auto invalid = [](const std::string& text) { return RunConfig::from_text(text); };
    EXPECT_THROW(invalid("n = 7\n").validate(), InvalidArgument);
    EXPECT_THROW(invalid("dt = 0.3\nT = 1\n").validate(), InvalidArgument);
    EXPECT_THROW(invalid("family = h\n").validate(), InvalidArgument);
    EXPECT_THROW(invalid("ic = wave\n").validate(), InvalidArgument);
    EXPECT_THROW(invalid("eps = 0.1,0.6\n").validate(), InvalidArgument);
    EXPECT_THROW(invalid("stride = 0\n").validate(), InvalidArgument);
    EXPECT_THROW(invalid("command = run\n").validate(), InvalidArgument);
    EXPECT_NO_THROW(RunConfig().validate());
}

TEST(Config, InitialConditionPresets) {
    const Grid g(64);
    EXPECT_EQ(initial_condition(g, "zero").max_abs(), 0.0);
    const Field s = initial_condition(g, "sine:0.3:2");
    EXPECT_NEAR(s[8], 0.3 * std::sin(2 * g.node(8)), 1e-15);
    const Field c = initial_condition(g, "cosine:0.5:1");
    EXPECT_NEAR(c[0], 0.5, 1e-15);
    const Field b = initial_condition(g, "bump:0.2:0.25");
    EXPECT_NEAR(b.max_abs(), 0.2, 1e-3);
    EXPECT_EQ(b[0], 0.0);
    EXPECT_THROW(initial_condition(g, "sine:0.1:1.5"), InvalidArgument);
    EXPECT_THROW(initial_condition(g, "sine:0.1:40"), InvalidArgument);
    EXPECT_THROW(initial_condition(g, "bump:0.1:0.9"), InvalidArgument);
}

TEST(Config, OutputRootHonoursEnvironment) {
    RunConfig c;
    c.out = "somewhere";
    ::setenv("GEOFLOW_OUT", "/tmp/elsewhere", 1);
    EXPECT_EQ(output_root(c), fs::path("/tmp/elsewhere"));
    ::unsetenv("GEOFLOW_OUT");
    EXPECT_EQ(output_root(c), fs::path("somewhere"));
}

TEST(Cli, SolveConservesMomentum) {
    const auto out = scratch("solve");
    ASSERT_EQ(run_cli(out, "solve --family h0 --n 256 --dt 1e-3 --T 0.5 --ic sine:0.2:1 --stride 50"), exit_ok);
    const auto j = read_json(out / "trajectory.json");
    EXPECT_LT(j["momentum_drift"].get<double>(), 1e-6);
    EXPECT_EQ(j["exit_reason"], "completed");
    EXPECT_TRUE(fs::exists(out / "solve.cfg"));
    const RunConfig echoed = RunConfig::from_file((out / "solve.cfg").string());
    EXPECT_EQ(echoed.n, 256u);
    EXPECT_DOUBLE_EQ(echoed.T, 0.5);
    std::ifstream csv(out / "trajectory.csv");
    std::string line;
    std::size_t lines = 0;
    while (std::getline(csv, line)) ++lines;
    EXPECT_GT(lines, 1u);
}

TEST(Cli, SolveReportsShock) {
    const auto out = scratch("shock");
    ASSERT_EQ(run_cli(out, "solve --n 256 --dt 1e-3 --T 2 --ic sine:0.2:1 --stride 100"), exit_shock);
    const auto j = read_json(out / "trajectory.json");
    EXPECT_EQ(j["exit_reason"], "shock");
    EXPECT_NEAR(j["shock_time"].get<double>(), 5.0 / 3.0, 1e-12);
    EXPECT_LT(j["final_time"].get<double>(), 5.0 / 3.0 + 1e-9);
}

TEST(Cli, ZeroInitialDataStaysAtRest) {
    const auto out = scratch("zero");
    ASSERT_EQ(run_cli(out, "solve --n 64 --dt 1e-2 --T 0.1 --ic zero"), exit_ok);
    const auto j = read_json(out / "trajectory.json");
    EXPECT_EQ(j["momentum_drift"].get<double>(), 0.0);
}

TEST(Cli, ConfigFileAndOverridePrecedence) {
    const auto out = scratch("precedence");
    {
        std::ofstream cfg(out / "run.cfg");
        cfg << "n = 32\ndt = 0.01\nT = 0.05\nic = sine:0.1:1\n";
    }
    ASSERT_EQ(run_cli(out, "solve --config '" + (out / "run.cfg").string() + "' --set n=48 T=0.02 --n 64"), exit_ok);
    const RunConfig echoed = RunConfig::from_file((out / "solve.cfg").string());
    EXPECT_EQ(echoed.n, 64u);
    EXPECT_DOUBLE_EQ(echoed.T, 0.02);
    EXPECT_DOUBLE_EQ(echoed.dt, 0.01);
}

TEST(Cli, InvalidArgumentsFailCleanly) {
    const auto out = scratch("invalid");
    EXPECT_EQ(run_cli(out, "solve --n 7"), 3);
    EXPECT_EQ(run_cli(out, "solve --set nonsense=1"), 3);
    EXPECT_EQ(run_cli(out, "jacobi --family h1 --T 0.01 --dt 0.01"), 3);
    EXPECT_NE(run_cli(out, "frobnicate"), 0);
}

TEST(Cli, VerifyIsDeterministic) {
    const auto a = scratch("verify_a"), b = scratch("verify_b");
    ASSERT_EQ(run_cli(a, "verify --suite algebra --seed 7"), exit_ok);
    ASSERT_EQ(run_cli(b, "verify --suite algebra --seed 7"), exit_ok);
    const std::string ja = slurp(a / "verify-algebra.json");
    EXPECT_FALSE(ja.empty());
    EXPECT_EQ(ja, slurp(b / "verify-algebra.json"));
    EXPECT_TRUE(read_json(a / "verify-algebra.json")["passed"].get<bool>());
}

TEST(Cli, VerifyCocyclesAndConvergence) {
    for (const char* suite : {"cocycles", "convergence"}) {
        const auto out = scratch(std::string("verify_") + suite);
        EXPECT_EQ(run_cli(out, std::string("verify --seed 7 --suite ") + suite), exit_ok) << suite;
        const auto j = read_json(out / ("verify-" + std::string(suite) + ".json"));
        EXPECT_TRUE(j["passed"].get<bool>()) << suite;
        for (const auto& p : j["properties"]) EXPECT_TRUE(p["pass"].get<bool>()) << p["property"];
    }
}

TEST(Cli, CurvatureSinCosTable) {
    const auto out = scratch("curvature");
    ASSERT_EQ(run_cli(out, "curvature --case virasoro-sincos --a1 0 --a2 0 --n 64"), exit_ok);
    std::ifstream csv(out / "curvature.csv");
    std::string header, row;
    std::getline(csv, header);
    std::getline(csv, row);
    EXPECT_EQ(header, "case,index,a1,a2,generic,closed_form,discrepancy,reference,reference_discrepancy");
    std::vector<std::string> cells;
    std::stringstream ss(row);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    ASSERT_EQ(cells.size(), 9u);
    const double pi = std::numbers::pi;
    EXPECT_NEAR(std::stod(cells[4]), -pi * (8.0 - 3.0 * pi), 1e-9);
    EXPECT_LT(std::stod(cells[6]), 1e-9);
    EXPECT_LT(std::stod(cells[8]), 1e-9);
}

TEST(Cli, JacobiConservesPairing) {
    const auto out = scratch("jacobi");
    ASSERT_EQ(run_cli(out, "jacobi --n 128 --dt 1e-3 --T 0.5 --a 0.5 --seed 3 --stride 100"), exit_ok);
    const auto j = read_json(out / "jacobi.json");
    EXPECT_LT(j["pairing_drift"].get<double>(), 1e-4 * std::max(1.0, std::abs(j["pairing_initial"].get<double>())));
    EXPECT_LT(j["b1_residual"].get<double>(), 1e-5);
    std::ifstream csv(out / "jacobi.csv");
    std::string header;
    std::getline(csv, header);
    EXPECT_EQ(header, "t,pairing,pairing_drift,b1_residual,y_sup");
}

TEST(Cli, VanishLengthBoundDecreases) {
    const auto out = scratch("vanish");
    ASSERT_EQ(run_cli(out, "vanish --eps 0.2,0.1,0.05"), exit_ok);
    const auto j = read_json(out / "vanish.json");
    EXPECT_TRUE(j["length_bound_decreasing"].get<bool>());
    ASSERT_EQ(j["rows"].size(), 3u);
    for (const auto& r : j["rows"])
        EXPECT_LE(r["basic_wave_energy"].get<double>(), 1.02 * r["basic_wave_bound"].get<double>());
}

TEST(Cli, CommandDispatchInProcess) {
    RunConfig c;
    c.command = "curvature";
    c.curvature_case = "burgers-sincos";
    c.n = 32;
    const auto out = scratch("inprocess");
    c.out = out.string();
    std::ostringstream log;
    EXPECT_EQ(run_command(c, log), exit_ok);
    EXPECT_NE(log.str().find("burgers-sincos"), std::string::npos);
    c.curvature_case = "nope";
    EXPECT_THROW(run_command(c, log), InvalidArgument);
}
