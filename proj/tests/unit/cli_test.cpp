#include "lieadapt/cli.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

namespace lieadapt {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           ("lieadapt_cli_" + std::string(info->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_config(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  static int run(std::vector<std::string> args) {
    args.insert(args.begin(), "lieadapt");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  static nlohmann::json summary_without_timing(const fs::path& out) {
    nlohmann::json j = nlohmann::json::parse(slurp(out / "summary.json"));
    j.erase("id_time_s");
    j.erase("collect_time_s");
    return j;
  }

  fs::path dir_;
};

constexpr const char* kSmallAdapt =
    "[identification]\nn_samples = 300\n[simulation]\nhorizon = 2\n";

TEST_F(CliTest, MissingConfigFile) {
  EXPECT_EQ(run({"simulate", "--config", (dir_ / "nope.toml").string(),
                 "--out", (dir_ / "o").string()}),
            kExitConfig);
}

TEST_F(CliTest, BadArguments) {
  EXPECT_EQ(run({}), kExitConfig);
  EXPECT_EQ(run({"fly"}), kExitConfig);
  EXPECT_EQ(run({"simulate", "--seed", "abc"}), kExitConfig);
  EXPECT_EQ(run({"simulate", "--jobs", "-1", "--out", (dir_ / "o").string()}),
            kExitConfig);
}

TEST_F(CliTest, SimulateDefaults) {
  const fs::path out = dir_ / "sim";
  ASSERT_EQ(run({"simulate", "--out", out.string()}), kExitOk);
  const auto metrics = nlohmann::json::parse(slurp(out / "metrics.json"));
  EXPECT_EQ(metrics["steps"], 1000);
  EXPECT_GT(metrics["e_p"].get<double>(), 0.0);
  std::ifstream traj(out / "trajectory.csv");
  std::string line;
  int lines = 0;
  while (std::getline(traj, line)) ++lines;
  EXPECT_EQ(lines, 1001);
  EXPECT_TRUE(fs::exists(out / "config.toml"));
}

TEST_F(CliTest, ZeroHorizonWritesHeaderOnly) {
  const fs::path cfg = write_config("c.toml", "[simulation]\nhorizon = 0\n");
  const fs::path out = dir_ / "zero";
  ASSERT_EQ(run({"simulate", "--config", cfg.string(), "--out", out.string()}),
            kExitOk);
  const std::string text = slurp(out / "trajectory.csv");
  EXPECT_EQ(text.rfind("t,px,py,pz,r00", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1);
  EXPECT_NE(text.find(",vz_d\n"), std::string::npos);
}

TEST_F(CliTest, DivergenceExitCode) {
  // A start half a turn away from the reference hits the log branch cut.
  const fs::path cfg = write_config(
      "c.toml", "[simulation]\ninitial_rotation = [3.14159265, 0, 0]\n");
  EXPECT_EQ(run({"simulate", "--config", cfg.string(), "--out",
                 (dir_ / "d").string()}),
            kExitDivergence);
}

TEST_F(CliTest, AdaptWritesArtifacts) {
  const fs::path cfg = write_config("c.toml", kSmallAdapt);
  const fs::path out = dir_ / "a";
  ASSERT_EQ(run({"adapt", "--config", cfg.string(), "--out", out.string(),
                 "--seed", "5"}),
            kExitOk);
  for (const char* f : {"summary.json", "dataset.csv", "trajectory_nominal.csv",
                        "trajectory_adaptive.csv", "config.toml"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
  const auto j = nlohmann::json::parse(slurp(out / "summary.json"));
  EXPECT_EQ(j["seed"], 5);
  EXPECT_EQ(j["N"], 300);
  EXPECT_EQ(j["sigma"].size(), 6u);
  for (const char* k : {"e_Ib", "e_m", "lambda", "id_time_s"}) {
    EXPECT_TRUE(j.contains(k)) << k;
  }
  for (const char* k : {"e_p", "e_R", "e_w", "e_v"}) {
    EXPECT_TRUE(j["tracking"].contains(k)) << k;
  }
  EXPECT_LT(j["e_Ib"].get<double>(), j["nominal"]["e_Ib"].get<double>());
}

TEST_F(CliTest, AdaptIsDeterministic) {
  const fs::path cfg = write_config("c.toml", kSmallAdapt);
  ASSERT_EQ(run({"adapt", "--config", cfg.string(), "--out",
                 (dir_ / "a").string(), "--seed", "11"}),
            kExitOk);
  ASSERT_EQ(run({"adapt", "--config", cfg.string(), "--out",
                 (dir_ / "b").string(), "--seed", "11"}),
            kExitOk);
  EXPECT_EQ(summary_without_timing(dir_ / "a").dump(),
            summary_without_timing(dir_ / "b").dump());
  EXPECT_EQ(slurp(dir_ / "a" / "dataset.csv"), slurp(dir_ / "b" / "dataset.csv"));
  ASSERT_EQ(run({"adapt", "--config", cfg.string(), "--out",
                 (dir_ / "c").string(), "--seed", "12"}),
            kExitOk);
  EXPECT_NE(summary_without_timing(dir_ / "a").dump(),
            summary_without_timing(dir_ / "c").dump());
}

TEST_F(CliTest, EchoedConfigReproducesOutputs) {
  const fs::path cfg = write_config("c.toml", kSmallAdapt);
  ASSERT_EQ(run({"adapt", "--config", cfg.string(), "--out",
                 (dir_ / "first").string(), "--seed", "21"}),
            kExitOk);
  ASSERT_EQ(run({"adapt", "--config", (dir_ / "first" / "config.toml").string(),
                 "--out", (dir_ / "second").string()}),
            kExitOk);
  EXPECT_EQ(summary_without_timing(dir_ / "first").dump(),
            summary_without_timing(dir_ / "second").dump());
  EXPECT_EQ(slurp(dir_ / "first" / "trajectory_adaptive.csv"),
            slurp(dir_ / "second" / "trajectory_adaptive.csv"));
}

TEST_F(CliTest, AdaptWithoutExcitation) {
  const fs::path cfg = write_config(
      "c.toml", "[identification]\nnoise_std = 0\nn_samples = 200\n");
  EXPECT_EQ(run({"adapt", "--config", cfg.string(), "--out",
                 (dir_ / "z").string()}),
            kExitConfig);
}

TEST_F(CliTest, TinySweep) {
  const fs::path cfg =
      write_config("c.toml", "[sweep]\ntrials = 2\ngrid = [200, 400]\n");
  const auto start = std::chrono::steady_clock::now();
  ASSERT_EQ(run({"sweep", "--config", cfg.string(), "--out",
                 (dir_ / "s1").string(), "--jobs", "1"}),
            kExitOk);
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  EXPECT_LT(secs, 30.0);
  const std::string sweep = slurp(dir_ / "s1" / "sweep.csv");
  EXPECT_EQ(std::count(sweep.begin(), sweep.end(), '\n'), 5);
  const std::string agg = slurp(dir_ / "s1" / "aggregate.csv");
  EXPECT_EQ(std::count(agg.begin(), agg.end(), '\n'), 3);
  EXPECT_EQ(slurp(dir_ / "s1" / "failures.csv"), "N,trial,reason\n");

  ASSERT_EQ(run({"sweep", "--config", cfg.string(), "--out",
                 (dir_ / "s2").string(), "--jobs", "2"}),
            kExitOk);
  // Error columns agree; the timing column may not.
  auto strip_time = [](const std::string& csv) {
    std::stringstream in(csv);
    std::string line, out;
    while (std::getline(in, line)) {
      std::vector<std::string> cells;
      std::stringstream ls(line);
      std::string c;
      while (std::getline(ls, c, ',')) cells.push_back(c);
      cells.erase(cells.begin() + 4);
      for (const auto& x : cells) out += x + ",";
      out += "\n";
    }
    return out;
  };
  EXPECT_EQ(strip_time(sweep), strip_time(slurp(dir_ / "s2" / "sweep.csv")));
}

TEST_F(CliTest, SweepWithMalformedGrid) {
  const fs::path cfg =
      write_config("c.toml", "[sweep]\ntrials = 2\ngrid = [200, \"x\"]\n");
  EXPECT_EQ(run({"sweep", "--config", cfg.string(), "--out",
                 (dir_ / "m").string()}),
            kExitConfig);
}

TEST_F(CliTest, SweepWithFailingCells) {
  const fs::path cfg = write_config(
      "c.toml",
      "[identification]\nnoise_std = 0\n[sweep]\ntrials = 1\ngrid = [100]\n");
  EXPECT_EQ(run({"sweep", "--config", cfg.string(), "--out",
                 (dir_ / "f").string()}),
            kExitPartialSweep);
  const std::string failures = slurp(dir_ / "f" / "failures.csv");
  EXPECT_NE(failures.find("100,0,"), std::string::npos);
}

}  // namespace
}  // namespace lieadapt
