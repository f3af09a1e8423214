#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "shockstab/cli.hpp"

using namespace shockstab;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("shockstab_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& body) const {
    std::ofstream(path(name)) << body;
    return path(name);
  }

  int run(const std::string& command, const std::string& config, const std::string& out, unsigned threads = 1) {
    RunConfig rc;
    rc.command = command;
    rc.input = config;
    rc.output = out.empty() ? std::string() : path(out);
    rc.threads = threads;
    err_.str("");
    return dispatch(rc, err_);
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  json error() const { return json::parse(err_.str()); }

  fs::path dir_;
  std::ostringstream err_;
};

const char* kCertify = R"({"model":{"kind":"scalar_cubic"},"family":1,"u_L":[1],"s0":1})";

}  // namespace

TEST_F(Cli, CertifySucceeds) {
  ASSERT_EQ(run("certify", write("c.json", kCertify), "out"), kExitOk) << err_.str();
  const json r = json::parse(slurp(path("out.json")));
  EXPECT_EQ(r["run"]["command"], "certify");
  EXPECT_TRUE(r["report"]["success"].get<bool>());
  EXPECT_GT(r["report"]["a_star"].get<double>(), 0.0);
  EXPECT_EQ(r["config"]["search"]["a_min"].get<double>(), 1e-8);
}

TEST_F(Cli, CertificationFailureWritesReport) {
  const std::string cfg = write(
      "c.json", R"({"model":{"kind":"scalar_cubic"},"family":1,"u_L":[1],"s0":1,"search":{"a_min":0.9,"a_max":0.99}})");
  EXPECT_EQ(run("certify", cfg, "out"), kExitCertificationFailed);
  EXPECT_EQ(error()["exit_code"], kExitCertificationFailed);
  const json r = json::parse(slurp(path("out.json")));
  EXPECT_FALSE(r["report"]["success"].get<bool>());
  EXPECT_FALSE(r["report"]["failure_reason"].get<std::string>().empty());
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run("certify", write("bad.json", "{bad"), "out"), kExitUsage);
  EXPECT_EQ(error()["error"], "invalid_json");
  EXPECT_EQ(run("certify", write("u.json", R"({"model":{"kind":"scalar_cubic"},"u_L":[1],"s0":1,"colour":2})"), "o"),
            kExitUsage);
  EXPECT_EQ(error()["exit_code"], kExitUsage);
  EXPECT_EQ(run("certify", "", "o"), kExitUsage);
  EXPECT_EQ(run("frobnicate", "", "o"), kExitUsage);
  EXPECT_EQ(run("certify", path("missing.json"), "o"), kExitUsage);
  EXPECT_EQ(run("certify", write("box.json", R"({"model":{"kind":"scalar_cubic"},"u_L":[9],"s0":1})"), "o"),
            kExitUsage);
  EXPECT_EQ(run("curve", write("m.json", R"({"model":{"kind":"scalar_cubic","m":1},"base":[1]})"), "o"), kExitUsage);
}

TEST_F(Cli, RefusesToOverwriteConfig) {
  const std::string cfg = write("same.json", kCertify);
  EXPECT_EQ(run("certify", cfg, "same"), kExitUsage);
  EXPECT_EQ(slurp(cfg), kCertify);
}

TEST_F(Cli, ModelsWithoutConfig) {
  ASSERT_EQ(run("models", "", "m"), kExitOk) << err_.str();
  const json r = json::parse(slurp(path("m.json")));
  EXPECT_EQ(r["report"]["models"].size(), 2u);
}

TEST_F(Cli, RegionMapCsvHasOneRowPerGridState) {
  const std::string cfg = write(
      "r.json",
      R"({"model":{"kind":"elastodynamics","m":1},"base":[1,0],"ranges":[[-4,4],[-8,8]],"points":[9,7]})");
  ASSERT_EQ(run("region-map", cfg, "rm"), kExitOk) << err_.str();
  std::istringstream csv(slurp(path("rm.csv")));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "w,v,class,s_param,covered_reason");
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 63);
  const json meta = json::parse(slurp(path("rm.meta.json")));
  EXPECT_EQ(meta["summary"]["cells"], 63);
  EXPECT_EQ(meta["config"]["policy"], "fixed");
}

TEST_F(Cli, CurveCsv) {
  const std::string cfg = write(
      "curve.json", R"({"model":{"kind":"elastodynamics","m":1},"base":[1,0],"s_min":-3,"s_max":2,"points":6})");
  ASSERT_EQ(run("curve", cfg, "c"), kExitOk) << err_.str();
  std::istringstream csv(slurp(path("c.csv")));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "s,w,v,sigma,sigma_prime,lax_admissible");
  std::getline(csv, line);
  EXPECT_EQ(line.substr(0, line.find(',', line.find(',', line.find(',') + 1) + 1)), "-3,-2,-6");
}

TEST_F(Cli, OutputsAreReproducible) {
  const std::string cfg = write("cfg.json", kCertify);
  ASSERT_EQ(run("certify", cfg, "a", 4), kExitOk);
  ASSERT_EQ(run("certify", cfg, "b", 4), kExitOk);
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
  ASSERT_EQ(run("certify", cfg, "c", 1), kExitOk);
  json a = json::parse(slurp(path("a.json"))), c = json::parse(slurp(path("c.json")));
  a["run"].erase("threads");
  c["run"].erase("threads");
  EXPECT_EQ(a, c);
}

TEST_F(Cli, SimulateWritesAllArtifacts) {
  const std::string cfg = write("s.json", R"({"model":{"kind":"elastodynamics","m":1},"u_L":[1,0],"s0":1,"a":0.1,
      "cells":100,"t_end":0.5,"snapshot_every":20,"C_star":6.2,"L":8.8,"perturbation":{"amplitude":0.05}})");
  ASSERT_EQ(run("simulate", cfg, "sim"), kExitOk) << err_.str();
  for (const char* ext : {".json", ".csv", ".meta.json", ".snapshots.csv"})
    EXPECT_TRUE(fs::exists(path(std::string("sim") + ext))) << ext;
  const json r = json::parse(slurp(path("sim.json")));
  EXPECT_FALSE(r["report"]["aborted"].get<bool>());
  EXPECT_EQ(r["config"]["C_star"].get<double>(), 6.2);
}

TEST_F(Cli, SimulateNeedsBothConstantsOrNeither) {
  const std::string cfg =
      write("s.json", R"({"model":{"kind":"elastodynamics","m":1},"u_L":[1,0],"s0":1,"a":0.1,"C_star":6.2})");
  EXPECT_EQ(run("simulate", cfg, "sim"), kExitUsage);
}
