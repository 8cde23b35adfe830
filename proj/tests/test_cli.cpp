#include "sls/cli.hpp"

#include <gtest/gtest.h>
#include <unistd.h>

#include <filesystem>
#include <sstream>

namespace sls {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        // one directory per test *process*: ctest may run fixtures concurrently
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() /
               ("sls_cli_" + std::to_string(::getpid()) + "_" + info->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string out_dir(const std::string& sub) const { return (dir_ / sub).string(); }

    fs::path dir_;
};

RunConfig chain_config(Command command, const std::string& out) {
    RunConfig config;
    config.command = command;
    config.chain_nodes = 8;
    config.alpha = 0.4;
    config.rho = 1.25;
    config.density = 1.0;
    config.d = 2;
    config.out_dir = out;
    return config;
}

TEST_F(CliTest, SynthesizeWritesArtifacts) {
    const RunConfig config = chain_config(Command::Synthesize, out_dir("synth"));
    EXPECT_EQ(run(config), 0);
    for (const char* name : {"clm.json", "controller.json", "cost.json", "summary.json"})
        EXPECT_TRUE(fs::exists(fs::path(config.out_dir) / name)) << name;

    const Json summary = parse_json_file(fs::path(config.out_dir) / "summary.json");
    EXPECT_TRUE(summary.at("achievability").at("passed").get<bool>());
    EXPECT_TRUE(summary.at("communication_audit").at("ok").get<bool>());
    EXPECT_GT(summary.at("h2_cost").get<double>(), 0.0);
}

TEST_F(CliTest, SimulateImpulseReportsLeak) {
    RunConfig config = chain_config(Command::Simulate, out_dir("sim"));
    config.sim_kind = "impulse";
    config.impulse_index = 3;
    config.sim_steps = 120;
    EXPECT_EQ(run(config), 0);
    const Json leak = parse_json_file(fs::path(config.out_dir) / "leak.json");
    EXPECT_LE(leak.at("leak").get<double>(), 1e-9);

    const std::string csv = read_text_file(fs::path(config.out_dir) / "trajectory.csv");
    EXPECT_EQ(csv.substr(0, 8), "t,x_1,x_");
}

TEST_F(CliTest, ValidateFailsWhenCommTooSmall) {
    RunConfig config = chain_config(Command::Validate, out_dir("val"));
    config.d = 2;
    config.comm_hops = 1;  // smaller than the localization pattern
    std::ostringstream captured;
    EXPECT_EQ(run_cli(config, captured), 1);

    const Json err = Json::parse(captured.str());
    EXPECT_EQ(err.at("error").at("code").get<std::string>(), "pattern_violation");
    EXPECT_TRUE(fs::exists(fs::path(config.out_dir) / "validation.json"));
    EXPECT_TRUE(fs::exists(fs::path(config.out_dir) / "error.json"));
}

TEST_F(CliTest, ValidateFlagsNonStabilizablePlant) {
    // drift-only unstable plant written through the JSON interchange format
    Plant doomed(1.5 * Matrix::Identity(3, 3), Matrix::Zero(3, 0),
                 SubsystemPartition({1, 1, 1}, {0, 0, 0}));
    const fs::path plant_path = dir_ / "plant.json";
    write_text_file(plant_path, plant_to_json(doomed).dump());

    RunConfig config;
    config.command = Command::Validate;
    config.plant_file = plant_path.string();
    config.d = 1;
    config.out_dir = out_dir("val2");
    std::ostringstream captured;
    EXPECT_EQ(run_cli(config, captured), 1);
    const Json err = Json::parse(captured.str());
    EXPECT_EQ(err.at("error").at("code").get<std::string>(), "not_stabilizable");
}

TEST_F(CliTest, ValidateReportsLocalizabilityColumns) {
    RunConfig config;
    config.command = Command::Validate;
    config.chain_nodes = 20;
    config.density = 0.5;
    config.d = 5;
    config.out_dir = out_dir("val3");
    std::ostringstream captured;
    EXPECT_EQ(run_cli(config, captured), 1);
    const Json err = Json::parse(captured.str());
    EXPECT_EQ(err.at("error").at("code").get<std::string>(), "localizability_failed");
    const Json report = parse_json_file(fs::path(config.out_dir) / "validation.json");
    EXPECT_FALSE(report.at("localizability").at("ok").get<bool>());
    EXPECT_EQ(report.at("localizability").at("failed_columns").size(), 10u);
}

TEST_F(CliTest, CompareFirProducesMonotoneColumn) {
    RunConfig config = chain_config(Command::CompareFir, out_dir("fir"));
    config.fir_horizons = {2, 4, 6};
    config.timing_repeats = 1;
    EXPECT_EQ(run(config), 0);
    const std::string csv = read_text_file(fs::path(config.out_dir) / "fir_compare.csv");
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);  // header
    double prev = std::numeric_limits<double>::infinity();
    int rows = 0;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::string f;
        std::istringstream ls(line);
        while (std::getline(ls, f, ',')) fields.push_back(f);
        const double fir_cost_value = std::stod(fields[5]);
        EXPECT_LE(fir_cost_value, prev + 1e-9);
        prev = fir_cost_value;
        ++rows;
    }
    EXPECT_EQ(rows, 3);
}

TEST_F(CliTest, SweepEmptyListsWriteEmptyTable) {
    RunConfig config = chain_config(Command::Sweep, out_dir("sweep"));
    EXPECT_EQ(run(config), 0);
    const std::string csv = read_text_file(fs::path(config.out_dir) / "sweep.csv");
    EXPECT_EQ(csv, std::string(kSweepCsvHeader) + "\n");
}

TEST_F(CliTest, RepeatedRunsAreByteIdentical) {
    RunConfig config = chain_config(Command::Synthesize, out_dir("det_a"));
    EXPECT_EQ(run(config), 0);
    RunConfig config_b = config;
    config_b.out_dir = out_dir("det_b");
    EXPECT_EQ(run(config_b), 0);
    for (const char* name : {"clm.json", "controller.json", "cost.json", "summary.json"})
        EXPECT_EQ(read_text_file(fs::path(config.out_dir) / name),
                  read_text_file(fs::path(config_b.out_dir) / name))
            << name;
}

TEST_F(CliTest, ConfigFileWithFlagOverrides) {
    const Json file_config{{"schema_version", 1}, {"command", "synthesize"}, {"chain", 6},
                           {"d", 1},             {"alpha", 0.2},            {"rho", 0.9},
                           {"out_dir", out_dir("cfg")}};
    RunConfig config;
    apply_config_json(config, file_config);
    EXPECT_EQ(config.command, Command::Synthesize);
    EXPECT_EQ(config.chain_nodes, 6);
    EXPECT_EQ(config.d, 1);
    EXPECT_DOUBLE_EQ(config.alpha, 0.2);

    Json bad = file_config;
    bad["schema_version"] = 99;
    RunConfig other;
    EXPECT_THROW(apply_config_json(other, bad), Error);
}

TEST_F(CliTest, WorkerCountResolution) {
    RunConfig config;
    config.workers = 4;
    EXPECT_EQ(detail::effective_workers(config), 4);

    config.workers = 0;
    ::setenv("SLS_WORKERS", "3", 1);
    EXPECT_EQ(detail::effective_workers(config), 3);
    ::setenv("SLS_WORKERS", "not-a-number", 1);
    EXPECT_EQ(detail::effective_workers(config), 0);
    ::unsetenv("SLS_WORKERS");
    EXPECT_EQ(detail::effective_workers(config), 0);
}

TEST_F(CliTest, GaussianSimulationIsSeedDeterministic) {
    RunConfig config = chain_config(Command::Simulate, out_dir("gauss_a"));
    config.sim_kind = "gaussian";
    config.sim_steps = 50;
    config.seed = 7;
    EXPECT_EQ(run(config), 0);
    RunConfig config_b = config;
    config_b.out_dir = out_dir("gauss_b");
    EXPECT_EQ(run(config_b), 0);
    EXPECT_EQ(read_text_file(fs::path(config.out_dir) / "trajectory.csv"),
              read_text_file(fs::path(config_b.out_dir) / "trajectory.csv"));

    RunConfig config_c = config;
    config_c.out_dir = out_dir("gauss_c");
    config_c.seed = 8;
    EXPECT_EQ(run(config_c), 0);
    EXPECT_NE(read_text_file(fs::path(config.out_dir) / "trajectory.csv"),
              read_text_file(fs::path(config_c.out_dir) / "trajectory.csv"));
}

}  // namespace
}  // namespace sls
