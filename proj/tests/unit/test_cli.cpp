#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "driftlab_cli/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "driftlab");
  std::vector<const char*> argv;
  for (const auto& a : args) {
    argv.push_back(a.c_str());
  }
  std::ostringstream out;
  std::ostringstream err;
  const int code = driftlab::cli::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string config(const std::string& name) { return std::string(DRIFTLAB_CONFIG_DIR) + "/" + name; }

fs::path fresh_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("driftlab_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path write_temp(const std::string& name, const std::string& text) {
  const auto p = fs::temp_directory_path() / name;
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST(Cli, ClassifyLmsd) {
  const auto dir = fresh_dir("classify");
  const auto r = run({"classify", "--config", config("lmsd_h09_exp.json"), "--out", dir.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("gamma=0.9 family=fbm_increment"), std::string::npos) << r.out;
  EXPECT_TRUE(fs::exists(dir / "report_lmsd_h09_exp.csv"));
  EXPECT_TRUE(fs::exists(dir / "manifest_lmsd_h09_exp.json"));
}

TEST(Cli, NonStationaryAcdExitsThree) {
  const auto r = run({"simulate", "--config", config("acd_nonstationary.json"), "--out", fresh_dir("nonstat").string()});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("stationary"), std::string::npos) << r.err;
}

TEST(Cli, UsageErrorsExitTwo) {
  auto r = run({"frobnicate", "--config", "x.json"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("unknown subcommand"), std::string::npos);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"rate"}).code, 2);
  EXPECT_EQ(run({"rate", "--config", "/nonexistent.json"}).code, 2);
  EXPECT_EQ(run({"rate", "--config", config("lmsd_h09_exp.json"), "--threads", "zero"}).code, 2);
}

TEST(Cli, BadConfigExitsTwo) {
  const auto p = write_temp("driftlab_cli_bad.json", R"({"scenario_id": "b", "model": {"type": "poisson", "rate": 1}, "colour": 1})");
  EXPECT_EQ(run({"classify", "--config", p.string()}).code, 2);
}

TEST(Cli, SimulateWritesTicksAndManifest) {
  const auto dir = fresh_dir("simulate");
  const auto p = write_temp("driftlab_cli_sim.json",
                            R"({"scenario_id": "sim", "model": {"type": "poisson", "rate": 1}, "mu": 0.05, "sigma_e": 0.1, "n_grid": [500]})");
  const auto r = run({"simulate", "--config", p.string(), "--out", dir.string(), "--seed", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* f : {"ticks_sim.csv", "returns_sim.csv", "report_sim.csv", "manifest_sim.json"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  const auto manifest = slurp(dir / "manifest_sim.json");
  for (const char* f : {"ticks_sim.csv", "returns_sim.csv", "report_sim.csv"}) {
    EXPECT_NE(manifest.find(f), std::string::npos);
  }
  EXPECT_NE(manifest.find("\"master_seed\": 5"), std::string::npos);
  EXPECT_EQ(slurp(dir / "returns_sim.csv").substr(0, 4), "j,r_");
}

TEST(Cli, RateTwiceIsByteIdentical) {
  const auto p = write_temp("driftlab_cli_rate.json",
                            R"({"scenario_id": "rep", "model": {"type": "acd", "omega": 0.05, "alpha": 0.6, "beta": 0.35},
                               "n_grid": [256, 512, 1024, 2048], "replicates": 150, "master_seed": 11})");
  const auto a = fresh_dir("rate_a");
  const auto b = fresh_dir("rate_b");
  ASSERT_EQ(run({"rate", "--config", p.string(), "--out", a.string()}).code, 0);
  ASSERT_EQ(run({"rate", "--config", p.string(), "--out", b.string(), "--threads", "2"}).code, 0);
  EXPECT_EQ(slurp(a / "report_rep.csv"), slurp(b / "report_rep.csv"));
  ASSERT_EQ(run({"rate", "--config", p.string(), "--out", b.string(), "--seed", "12"}).code, 0);
  EXPECT_NE(slurp(a / "report_rep.csv"), slurp(b / "report_rep.csv"));
}

TEST(Cli, TtestAndS2) {
  const auto dir = fresh_dir("ttest");
  const auto p = write_temp("driftlab_cli_t.json",
                            R"({"scenario_id": "tt", "model": {"type": "poisson", "rate": 1}, "mu": 0.05, "sigma_e": 0.1,
                               "n_grid": [128, 256], "replicates": 100})");
  auto r = run({"ttest", "--config", p.string(), "--out", dir.string(), "--spacing", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("rejection_rate"), std::string::npos);
  EXPECT_NE(slurp(dir / "report_tt.csv").find("mu0_star,0.1,"), std::string::npos);
  r = run({"s2", "--config", p.string(), "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(slurp(dir / "report_tt.csv").find("s2_target"), std::string::npos);
}
