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

#include "augsearch/cli/commands.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "augsearch/analytics/stats.hpp"
#include "augsearch/nn/checkpoint.hpp"
#include "augsearch/search/randaugment_search.hpp"

namespace augsearch {

namespace {

namespace fs = std::filesystem;

std::string slurpFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void writeText(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed for " + path);
}

/// Run directory bookkeeping: the resolved config plus a manifest naming
/// every artifact makes a run reproducible byte-for-byte given the binary.
class RunDir {
public:
  RunDir(const RunConfig& cfg, const std::string& command) : cfg_(cfg), command_(command) {
    fs::create_directories(cfg.outDir);
    writeText(path("resolved_config.toml"), resolvedConfigToml(cfg));
  }

  std::string path(const std::string& name) const {
    return (fs::path(cfg_.outDir) / name).string();
  }

  void addArtifact(const std::string& name) { artifacts_.push_back(name); }

  void finish(const Dataset& data) const {
    std::ostringstream out;
    out << "{\"command\":\"" << command_ << "\",\"seed\":" << cfg_.seed << ",\"dataset\":{\"name\":\""
        << data.name << "\",\"size\":" << data.size() << "},\"artifacts\":[";
    out << "\"resolved_config.toml\"";
    for (const auto& a : artifacts_) out << ",\"" << a << "\"";
    out << "]}\n";
    writeText(path("manifest.json"), out.str());
  }

private:
  const RunConfig& cfg_;
  std::string command_;
  std::vector<std::string> artifacts_;
};

MocoConfig shortMocoConfig(const RunConfig& cfg) {
  MocoConfig shortCfg = cfg.moco;
  shortCfg.epochs = std::max(
      1, static_cast<int>(std::lround(cfg.moco.epochs * cfg.search.baseEpochFraction)));
  return shortCfg;
}

void writeBaseReports(const std::string& path, const std::vector<BaseSelectionReport>& reports) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "op,probeLoss,probeTop1,diverged\n";
  char buf[64];
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f", r.probeLoss, r.probeTop1);
    out << opName(r.op) << "," << buf << "," << (r.diverged ? 1 : 0) << "\n";
  }
}

}  // namespace

void cmdFindBase(const RunConfig& cfg) {
  cfg.validate();
  RunDir run(cfg, "find-base");
  const Dataset data = loadConfiguredDataset(cfg);
  std::vector<BaseSelectionReport> reports;
  const BasePolicy base =
      selectBasePolicy(data, shortMocoConfig(cfg), cfg.probe, cfg.seed, cfg.workers, &reports);
  writeText(run.path("base_policy.json"), serializeBasePolicy(base) + "\n");
  writeBaseReports(run.path("base_reports.csv"), reports);
  run.addArtifact("base_policy.json");
  run.addArtifact("base_reports.csv");
  run.finish(data);
  std::cout << "base policy: " << opName(base.op) << "\n";
}

void cmdSearch(const RunConfig& cfg, const std::string& basePolicyPath) {
  cfg.validate();
  RunDir run(cfg, "search");
  const Dataset data = loadConfiguredDataset(cfg);
  SearchConfig search = cfg.search;
  search.workers = cfg.workers;
  if (!basePolicyPath.empty()) {
    search.fixedBase = deserializeBasePolicy(slurpFile(basePolicyPath));
  }
  const SelfAugmentResult result = runSelfAugment(data, search, cfg.moco, cfg.probe, cfg.seed);
  writeText(run.path("final_policy.json"), serializePolicy(result.policy) + "\n");
  writeText(run.path("base_policy.json"), serializeBasePolicy(result.base) + "\n");
  writeTrialLog(run.path("trials.jsonl"), result.trials);
  run.addArtifact("final_policy.json");
  run.addArtifact("base_policy.json");
  run.addArtifact("trials.jsonl");
  if (!result.baseReports.empty()) {
    writeBaseReports(run.path("base_reports.csv"), result.baseReports);
    run.addArtifact("base_reports.csv");
  }
  run.finish(data);
  std::cout << "searched policy with " << result.policy.subPolicies.size() << " sub-policies ("
            << lossKindName(cfg.search.lossKind) << ")\n";
}

void cmdPretrain(const RunConfig& cfg, const std::string& policyPath) {
  cfg.validate();
  RunDir run(cfg, "pretrain");
  const Dataset data = loadConfiguredDataset(cfg);
  std::unique_ptr<ViewAugmenter> augmenter;
  std::string policyName = "base";
  if (policyPath.empty()) {
    augmenter = std::make_unique<BasePipeline>();
  } else {
    const std::string text = slurpFile(policyPath);
    if (text.find("\"kind\"") != std::string::npos) {
      augmenter = makeBaseAugmenter(deserializeBasePolicy(text));
      policyName = "base-policy";
    } else {
      Policy policy = deserializePolicy(text);
      policyName = policy.name;
      augmenter = std::make_unique<PolicyAugmenter>(std::move(policy));
    }
  }
  auto result = trainMoco(data, *augmenter, cfg.moco, cfg.seed);
  saveCheckpoint(run.path("checkpoint.bin"), encoderStateTensors(result.state));
  writeTrainingLog(run.path("train_log.jsonl"), result.log);
  run.addArtifact("checkpoint.bin");
  run.addArtifact("train_log.jsonl");
  run.finish(data);
  std::cout << "pretrained with policy \"" << policyName << "\": final loss "
            << result.log.back().loss << "\n";
}

void cmdProbe(const RunConfig& cfg, const std::string& checkpointPath, const std::string& task) {
  cfg.validate();
  RunDir run(cfg, "probe");
  const Dataset data = loadConfiguredDataset(cfg);
  const EncoderState state = encoderStateFromTensors(cfg.moco, loadCheckpoint(checkpointPath));
  ProbeTask probeTask;
  if (task == "rotation") {
    probeTask = ProbeTask::rotation();
  } else if (task == "jigsaw") {
    probeTask = ProbeTask::jigsaw();
  } else if (task == "supervised") {
    probeTask = ProbeTask::supervised(data.numClasses);
  } else {
    throw ContractError("probe: unknown task \"" + task + "\"");
  }
  const ProbeResult result = trainProbe(state.query, probeTask, data, cfg.probe, cfg.seed);
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "{\"task\":\"%s\",\"top1\":%.6f,\"evalLoss\":%.6f,\"trainTop1\":%.6f}\n",
                task.c_str(), result.top1, result.evalLoss, result.trainTop1);
  writeText(run.path("report.json"), buf);
  run.addArtifact("report.json");
  run.finish(data);
  std::cout << task << " top1: " << result.top1 << "\n";
}

void cmdCorrelate(const RunConfig& cfg, const std::string& studyPath) {
  cfg.validate();
  RunDir run(cfg, "correlate");
  const Dataset data = loadConfiguredDataset(cfg);

  std::vector<StudySpec> specs;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(slurpFile(studyPath));
    for (const auto& item : doc) {
      StudySpec spec;
      spec.name = item.at("name").get<std::string>();
      const std::string kind = item.at("kind").get<std::string>();
      if (kind == "baseOnly") {
        spec.kind = StudySpec::Kind::baseOnly;
      } else if (kind == "singleOp") {
        spec.kind = StudySpec::Kind::singleOp;
        spec.op = opFromName(item.at("op").get<std::string>());
      } else if (kind == "policy") {
        spec.kind = StudySpec::Kind::policy;
        if (item.contains("policyPath")) {
          spec.policy = deserializePolicy(slurpFile(item.at("policyPath").get<std::string>()));
        } else {
          spec.policy = deserializePolicy(item.at("policy").dump());
        }
      } else {
        throw ParseError("study spec: unknown kind \"" + kind + "\"");
      }
      spec.epochs = item.value("epochs", cfg.moco.epochs);
      specs.push_back(std::move(spec));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("study spec: ") + e.what());
  }

  CorrelationConfig corr;
  corr.moco = cfg.moco;
  corr.probe = cfg.probe;
  corr.workers = cfg.workers;
  const CorrelationResult result = runCorrelationStudy(specs, data, corr, cfg.seed);
  emitReports(result.reports, run.path("reports.csv"), ReportFormat::csv);
  emitReports(result.reports, run.path("reports.jsonl"), ReportFormat::jsonl);
  char buf[128];
  std::snprintf(buf, sizeof(buf), "{\"rhoRotation\":%.6f,\"rhoJigsaw\":%.6f}\n",
                result.rhoRotation, result.rhoJigsaw);
  writeText(run.path("correlations.json"), buf);
  run.addArtifact("reports.csv");
  run.addArtifact("reports.jsonl");
  run.addArtifact("correlations.json");
  run.finish(data);
  std::cout << "rotation rho: " << result.rhoRotation << ", jigsaw rho: " << result.rhoJigsaw
            << "\n";
}

void cmdRandAugment(const RunConfig& cfg) {
  cfg.validate();
  RunDir run(cfg, "randaugment");
  const Dataset data = loadConfiguredDataset(cfg);
  std::vector<std::pair<int, int>> grid;
  for (int nTau : cfg.gridNTau) {
    for (int lambda : cfg.gridLambda) grid.emplace_back(nTau, lambda);
  }
  const RandAugmentGridResult result =
      runSelfRandAugment(data, grid, cfg.moco, cfg.probe, cfg.seed, cfg.workers);
  writeText(run.path("best_randaugment.json"),
            serializePolicy(makeRandaugmentPolicy(result.best)) + "\n");
  emitReports(result.reports, run.path("randaugment_reports.csv"), ReportFormat::csv);
  run.addArtifact("best_randaugment.json");
  run.addArtifact("randaugment_reports.csv");
  run.finish(data);
  std::cout << "best randaugment: nTau=" << result.best.nTau
            << " lambda=" << result.best.lambdaDiscrete << "\n";
}

}  // namespace augsearch
