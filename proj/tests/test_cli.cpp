// Copyright 2026 The augsearch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "augsearch/cli/commands.hpp"

using namespace augsearch;
namespace fs = std::filesystem;

namespace {

RunConfig tinyConfig(const std::string& outDir) {
  RunConfig cfg;
  cfg.dataSource = "synthetic";
  cfg.classes = 3;
  cfg.perClass = 16;
  cfg.imageSize = 12;
  cfg.outDir = outDir;
  cfg.workers = 2;
  cfg.moco.queueSize = 8;
  cfg.moco.batchSize = 8;
  cfg.moco.momentum = 0.9;
  cfg.moco.epochs = 2;
  cfg.moco.encoder.channels = {8};
  cfg.moco.encoder.strides = {2};
  cfg.moco.encoder.projectionDim = 8;
  cfg.moco.sgd.lr = 0.02;
  cfg.probe.epochs = 4;
  cfg.search.K = 2;
  cfg.search.T = 1;
  cfg.search.B = 4;
  cfg.search.P = 1;
  cfg.gridNTau = {1};
  cfg.gridLambda = {9};
  return cfg;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path freshDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  return dir;
}

int runBinary(const std::string& args) {
#ifdef AUGSEARCH_BIN_PATH
  const std::string cmd = std::string(AUGSEARCH_BIN_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
#else
  (void)args;
  return -1;
#endif
}

}  // namespace

TEST_CASE("list and schedule parsing") {
  CHECK(parseIntList("4,5,7") == std::vector<int>{4, 5, 7});
  CHECK(parseIntList("") == std::vector<int>{});
  const auto plain = parseSchedule("120,160");
  REQUIRE(plain.size() == 2);
  CHECK(plain[0] == std::pair<int, double>{120, 0.1});
  const auto multi = parseSchedule("30:0.5,60:0.1");
  REQUIRE(multi.size() == 2);
  CHECK(multi[0].second == doctest::Approx(0.5));
}

TEST_CASE("resolved config is byte-stable and round-trips the profile") {
  RunConfig cfg = tinyConfig("unused");
  const std::string a = resolvedConfigToml(cfg);
  const std::string b = resolvedConfigToml(cfg);
  CHECK(a == b);
  CHECK(a.find("[moco]") != std::string::npos);
  CHECK(a.find("queueSize=8") != std::string::npos);
  CHECK(a.find("loss=minimax") != std::string::npos);
}

TEST_CASE("configured dataset loading honors subsample") {
  RunConfig cfg = tinyConfig("unused");
  cfg.subsample = 10;
  const Dataset data = loadConfiguredDataset(cfg);
  CHECK(data.size() == 10);
  RunConfig bad = cfg;
  bad.dataSource = "webdataset";
  CHECK_THROWS_AS(bad.validate(), ContractError);
}

TEST_CASE("pretrain and probe commands produce run artifacts") {
  const fs::path dir = freshDir("augsearch_cli_pretrain");
  RunConfig cfg = tinyConfig(dir.string());
  cmdPretrain(cfg, "");
  CHECK(fs::exists(dir / "checkpoint.bin"));
  CHECK(fs::exists(dir / "train_log.jsonl"));
  CHECK(fs::exists(dir / "resolved_config.toml"));
  const std::string manifest = slurp((dir / "manifest.json").string());
  CHECK(manifest.find("\"command\":\"pretrain\"") != std::string::npos);
  CHECK(manifest.find("checkpoint.bin") != std::string::npos);

  const fs::path probeDir = freshDir("augsearch_cli_probe");
  RunConfig probeCfg = cfg;
  probeCfg.outDir = probeDir.string();
  cmdProbe(probeCfg, (dir / "checkpoint.bin").string(), "rotation");
  const std::string report = slurp((probeDir / "report.json").string());
  CHECK(report.find("\"task\":\"rotation\"") != std::string::npos);
  CHECK(report.find("\"top1\"") != std::string::npos);
  CHECK_THROWS_AS(cmdProbe(probeCfg, (dir / "checkpoint.bin").string(), "colorize"),
                  ContractError);
  fs::remove_all(dir);
  fs::remove_all(probeDir);
}

TEST_CASE("find-base writes identical output under the same seed") {
  const fs::path dirA = freshDir("augsearch_cli_base_a");
  const fs::path dirB = freshDir("augsearch_cli_base_b");
  RunConfig cfg = tinyConfig(dirA.string());
  cfg.moco.epochs = 1;
  cfg.probe.epochs = 2;
  cmdFindBase(cfg);
  cfg.outDir = dirB.string();
  cmdFindBase(cfg);
  CHECK(slurp((dirA / "base_policy.json").string()) == slurp((dirB / "base_policy.json").string()));
  const std::string reports = slurp((dirA / "base_reports.csv").string());
  CHECK(reports.substr(0, reports.find('\n')) == "op,probeLoss,probeTop1,diverged");
  // 16 candidates + header
  CHECK(std::count(reports.begin(), reports.end(), '\n') == 17);
  fs::remove_all(dirA);
  fs::remove_all(dirB);
}

TEST_CASE("search command writes the policy and trial log") {
  const fs::path dir = freshDir("augsearch_cli_search");
  RunConfig cfg = tinyConfig(dir.string());
  cfg.moco.epochs = 1;
  cfg.probe.epochs = 2;
  cfg.search.lossKind = LossKind::minimax;

  // Fixed base policy file skips the sweep.
  const fs::path basePath = dir / "fixed_base.json";
  fs::create_directories(dir);
  {
    std::ofstream out(basePath);
    out << "{\"kind\":\"singleOp\",\"op\":\"randomResizeCrop\"}";
  }
  cmdSearch(cfg, basePath.string());
  const std::string policyDoc = slurp((dir / "final_policy.json").string());
  const Policy policy = deserializePolicy(policyDoc);
  CHECK(policy.subPolicies.size() == 2);  // K*T*P = 2*1*1
  CHECK(policy.provenance.lossKind == "minimax");
  CHECK(fs::exists(dir / "trials.jsonl"));
  fs::remove_all(dir);
}

TEST_CASE("randaugment command reports the single grid point") {
  const fs::path dir = freshDir("augsearch_cli_ra");
  RunConfig cfg = tinyConfig(dir.string());
  cfg.moco.epochs = 1;
  cfg.probe.epochs = 2;
  cmdRandAugment(cfg);
  const Policy best = deserializePolicy(slurp((dir / "best_randaugment.json").string()));
  REQUIRE(best.randaugment.has_value());
  CHECK(best.randaugment->nTau == 1);
  CHECK(best.randaugment->lambdaDiscrete == 9);
  CHECK(fs::exists(dir / "randaugment_reports.csv"));
  fs::remove_all(dir);
}

TEST_CASE("correlate command consumes a study spec") {
  const fs::path dir = freshDir("augsearch_cli_corr");
  fs::create_directories(dir);
  RunConfig cfg = tinyConfig(dir.string());
  cfg.classes = 10;
  cfg.perClass = 10;
  cfg.moco.epochs = 2;
  cfg.probe.epochs = 4;
  const fs::path studyPath = dir / "study.json";
  {
    std::ofstream out(studyPath);
    out << R"([{"name":"base","kind":"baseOnly","epochs":2},)"
        << R"({"name":"inv","kind":"singleOp","op":"invert","epochs":2},)"
        << R"({"name":"rot","kind":"singleOp","op":"rotate","epochs":2}])";
  }
  cmdCorrelate(cfg, studyPath.string());
  const std::string csv = slurp((dir / "reports.csv").string());
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);  // header + 3 rows
  CHECK(fs::exists(dir / "correlations.json"));
  fs::remove_all(dir);
}

#ifdef AUGSEARCH_BIN_PATH
TEST_CASE("binary exit codes") {
  CHECK(runBinary("definitely-not-a-subcommand") == 1);
  CHECK(runBinary("--help") == 0);
  // Missing dataset directory: runtime failure.
  const fs::path dir = freshDir("augsearch_cli_exit");
  CHECK(runBinary("--data.source cifar10 --data.dir /nonexistent --run.outDir " + dir.string() +
                  " pretrain") == 2);
  fs::remove_all(dir);
}

TEST_CASE("binary runs a config file end to end") {
  const fs::path dir = freshDir("augsearch_cli_cfgfile");
  fs::create_directories(dir);
  const fs::path cfgPath = dir / "desk.toml";
  {
    std::ofstream out(cfgPath);
    out << "[data]\nsource=synthetic\nclasses=3\nperClass=16\nimageSize=12\n\n"
        << "[run]\nseed=4\noutDir=" << (dir / "run").string() << "\nworkers=2\n\n"
        << "[moco]\nepochs=1\nbatchSize=8\nqueueSize=8\nmomentum=0.9\nchannels=8\nstrides=2\n"
        << "projectionDim=8\nlr=0.02\n\n[probe]\nepochs=2\n";
  }
  CHECK(runBinary("--config " + cfgPath.string() + " pretrain") == 0);
  CHECK(fs::exists(dir / "run" / "checkpoint.bin"));
  // CLI flag overrides the config file value.
  CHECK(runBinary("--config " + cfgPath.string() + " --run.outDir " + (dir / "run2").string() +
                  " pretrain") == 0);
  CHECK(fs::exists(dir / "run2" / "checkpoint.bin"));
  fs::remove_all(dir);
}
#endif
