#include "powerobs/commands.hpp"
#include "powerobs/config.hpp"
#include "powerobs/csv.hpp"
#include "powerobs/diagnostics.hpp"
#include "powerobs/errors.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace powerobs::cli {
namespace {

namespace fs = std::filesystem;

const std::string kShipped = std::string(POWEROBS_SCENARIO_DIR) + "/two_machine_load_change.json";

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CommandsTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("powerobs_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return run_cli(args, out_, err_);
  }

  // Shipped scenario with one substring replaced.
  std::string variant(const std::string& from, const std::string& to) {
    std::string text = read_file(kShipped);
    const auto pos = text.find(from);
    EXPECT_NE(pos, std::string::npos) << from;
    text.replace(pos, from.size(), to);
    const std::string p = path("variant.json");
    std::ofstream(p) << text;
    return p;
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

std::optional<std::string> summary_value(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key + " ", 0) == 0) return line.substr(key.size() + 1);
  }
  return std::nullopt;
}

TEST_F(CommandsTest, SimulateWritesCsvAndSummary) {
  const std::string csv = path("run.csv");
  ASSERT_EQ(run({"simulate", "--config", kShipped, "--out", csv}), 0) << err_.str();
  std::ifstream in(csv);
  const CsvTable table = read_csv(in);
  const std::vector<std::string> expected{
      "t",          "delta_1",     "delta_2",     "omega_1",   "omega_2",  "E_1",
      "E_2",        "Ehat_drem_1", "Ehat_drem_2", "Ehat_ftc_1", "Ehat_ftc_2", "omegahat_1",
      "omegahat_2", "err_E_drem",  "err_E_ftc",   "err_omega", "Delta",    "intDelta2",
      "w"};
  EXPECT_EQ(table.header, expected);
  ASSERT_EQ(table.rows.size(), 5001u);
  EXPECT_EQ(table.rows.back()[0], 50.0);

  // The reported crossing time agrees with the monitor applied to the logged Delta.
  const std::vector<double> delta = table.values("Delta");
  const double dt = table.rows[1][0] - table.rows[0][0];
  const auto report = observers::excitation_monitor(delta, dt, 1e4, 0.1);
  ASSERT_TRUE(report.crossing_time.has_value());
  const auto t_c = summary_value(out_.str(), "t_c");
  ASSERT_TRUE(t_c.has_value()) << out_.str();
  EXPECT_NEAR(std::stod(*t_c), *report.crossing_time, 1e-12);
  EXPECT_TRUE(summary_value(out_.str(), "intDelta2_tail").has_value());
}

TEST_F(CommandsTest, SimulateReportsKalmanVerdict) {
  ASSERT_EQ(run({"simulate", "--config", kShipped, "--out", path("k.csv"), "--observers",
                 "kalman", "--t-end", "12"}),
            0)
      << err_.str();
  const auto verdict = summary_value(out_.str(), "kalman");
  ASSERT_TRUE(verdict.has_value()) << out_.str();
  EXPECT_TRUE(verdict->rfind("converged", 0) == 0 || verdict->rfind("not converged", 0) == 0);
  std::ifstream in(path("k.csv"));
  const CsvTable table = read_csv(in);
  EXPECT_NO_THROW(table.column("Ehat_kalman_2"));
  EXPECT_THROW(table.column("Delta"), Error);
}

TEST_F(CommandsTest, EmptyObserverListFails) {
  EXPECT_EQ(run({"simulate", "--config", kShipped, "--out", path("x.csv"), "--observers", ""}), 1);
  EXPECT_EQ(err_.str().rfind("error: ValidationError: ", 0), 0u) << err_.str();
  EXPECT_FALSE(fs::exists(path("x.csv")));
}

TEST_F(CommandsTest, UsageErrors) {
  EXPECT_EQ(run({"simulate", "--out", path("x.csv")}), 2);
  EXPECT_EQ(err_.str().rfind("error: UsageError: ", 0), 0u) << err_.str();
  EXPECT_EQ(run({"frobnicate"}), 2);
}

TEST_F(CommandsTest, MissingConfigIsIoError) {
  EXPECT_EQ(run({"simulate", "--config", path("none.json"), "--out", path("x.csv")}), 1);
  EXPECT_EQ(err_.str().rfind("error: IoError: ", 0), 0u) << err_.str();
}

TEST_F(CommandsTest, GramianWithIdentityOutputShowsObservability) {
  ASSERT_EQ(run({"gramian", "--config", kShipped, "--window", "5", "--output-map", "identity"}), 0)
      << err_.str();
  EXPECT_EQ(summary_value(out_.str(), "verdict"), "UCO evidence");
  EXPECT_GT(std::stod(*summary_value(out_.str(), "min_eig")), 0.0);
}

TEST_F(CommandsTest, GramianOfFreeResponseIsSingular) {
  const std::string cfg = variant("\"u\": [1.2405, 1.2405]", "\"u\": [0.0, 0.0]");
  ASSERT_EQ(run({"gramian", "--config", cfg, "--window", "10"}), 0) << err_.str();
  EXPECT_EQ(summary_value(out_.str(), "verdict"), "not UCO");
  EXPECT_LE(std::stod(*summary_value(out_.str(), "ratio")), kUcoRatioThreshold);
}

TEST_F(CommandsTest, GramianWindowErrors) {
  EXPECT_EQ(run({"gramian", "--config", kShipped, "--window", "0.001"}), 1);
  EXPECT_EQ(err_.str().rfind("error: EmptyWindow: ", 0), 0u) << err_.str();
  EXPECT_EQ(run({"gramian", "--config", kShipped, "--window", "60"}), 1);
  EXPECT_EQ(err_.str().rfind("error: ValidationError: ", 0), 0u) << err_.str();
}

TEST_F(CommandsTest, SweepEmptyValuesFails) {
  EXPECT_EQ(run({"sweep", "--config", kShipped, "--param", "gamma", "--values", "",
                 "--out", path("s.csv")}),
            1);
  EXPECT_EQ(err_.str().rfind("error: ValidationError: ", 0), 0u) << err_.str();
}

TEST_F(CommandsTest, SweepUnknownParameterFails) {
  EXPECT_EQ(run({"sweep", "--config", kShipped, "--param", "tau", "--values", "1",
                 "--out", path("s.csv")}),
            1);
}

TEST_F(CommandsTest, SingleValueSweepMatchesSimulate) {
  const std::vector<std::string> common{"--config", kShipped, "--t-end", "15", "--observers",
                                        "drem,speed"};
  std::vector<std::string> sweep{"sweep", "--param", "gamma", "--values", "3",
                                 "--out", path("sweep.csv")};
  sweep.insert(sweep.end(), common.begin(), common.end());
  ASSERT_EQ(run(sweep), 0) << err_.str();
  std::vector<std::string> sim{"simulate", "--gamma", "3", "--out", path("sim.csv")};
  sim.insert(sim.end(), common.begin(), common.end());
  ASSERT_EQ(run(sim), 0) << err_.str();
  EXPECT_EQ(read_file(path("sweep_gamma_0.csv")), read_file(path("sim.csv")));

  std::istringstream lines(read_file(path("sweep.csv")));
  std::string header, row, extra;
  std::getline(lines, header);
  std::getline(lines, row);
  EXPECT_EQ(header, "param,value,settle_E_drem,settle_E_ftc,settle_E_kalman,settle_omega,"
                    "slope_omega_1,slope_omega_2");
  EXPECT_EQ(row.rfind("gamma,3,", 0), 0u) << row;
  EXPECT_FALSE(std::getline(lines, extra));
}

TEST_F(CommandsTest, SweepOrderFollowsValues) {
  const sim::Scenario s = load_config(kShipped).scenario;
  sim::Scenario shorter = s;
  shorter.t_end = 12.0;
  const auto logs = run_sweep(shorter, "k_omega", {1.0, 5.0, 25.0}, 10);
  ASSERT_EQ(logs.size(), 3u);
  double previous = 0.0;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    EXPECT_EQ(logs[i].observers.speed_gain[0], std::vector<double>({1.0, 5.0, 25.0})[i]);
    const SweepRow row = sweep_row(logs[i], logs[i].observers.speed_gain[0]);
    ASSERT_TRUE(row.speed_slope[1].has_value());
    EXPECT_LT(*row.speed_slope[1], previous);
    previous = *row.speed_slope[1];
  }
}

TEST(Csv, SeventeenDigitsRoundTrip) {
  std::mt19937_64 rng(90);
  std::uniform_real_distribution<double> mantissa(-1.0, 1.0);
  std::uniform_int_distribution<int> exponent(-300, 300);
  for (int trial = 0; trial < 10000; ++trial) {
    const double v = std::ldexp(mantissa(rng), exponent(rng));
    ASSERT_EQ(std::strtod(format_double(v).c_str(), nullptr), v) << format_double(v);
  }
}

TEST(Csv, MalformedRowNamesLine) {
  std::istringstream in("t,x\n0,1\n0.1,abc\n");
  try {
    read_csv(in);
    FAIL() << "expected ParseError";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Parse);
    EXPECT_NE(std::string(e.what()).find("3"), std::string::npos) << e.what();
  }
}

}  // namespace
}  // namespace powerobs::cli
