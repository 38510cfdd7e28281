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

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <iostream>

#include "augsearch/cli/commands.hpp"

namespace {

using augsearch::RunConfig;

struct CliState {
  RunConfig cfg;
  std::string configPath;
  std::string scheduleText;
  std::string probeScheduleText;
  std::string channelsText;
  std::string stridesText;
  std::string lossText;
  std::string gridNTauText;
  std::string gridLambdaText;
  std::string basePolicyPath;
  std::string policyPath;
  std::string checkpointPath;
  std::string taskName = "rotation";
  std::string studyPath;
};

void applyTextOptions(CliState& state) {
  using namespace augsearch;
  if (!state.scheduleText.empty()) state.cfg.moco.sgd.schedule = parseSchedule(state.scheduleText);
  if (!state.probeScheduleText.empty()) {
    state.cfg.probe.sgd.schedule = parseSchedule(state.probeScheduleText);
  }
  if (!state.channelsText.empty()) {
    state.cfg.moco.encoder.channels = parseIntList(state.channelsText);
    state.cfg.moco.encoder.strides.assign(state.cfg.moco.encoder.channels.size(), 2);
    state.cfg.moco.encoder.strides[0] = 1;
  }
  if (!state.stridesText.empty()) state.cfg.moco.encoder.strides = parseIntList(state.stridesText);
  if (!state.lossText.empty()) state.cfg.search.lossKind = lossKindFromName(state.lossText);
  if (!state.gridNTauText.empty()) state.cfg.gridNTau = parseIntList(state.gridNTauText);
  if (!state.gridLambdaText.empty()) state.cfg.gridLambda = parseIntList(state.gridLambdaText);
  if (const char* envSeed = std::getenv("SELFAUG_SEED")) {
    state.cfg.seed = std::strtoull(envSeed, nullptr, 10);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CliState state;
  RunConfig& cfg = state.cfg;

  CLI::App app{"Unsupervised augmentation policy search for instance contrastive pretraining"};
  app.require_subcommand(1);
  app.add_option("--config", state.configPath, "TOML-style configuration file");
  app.fallthrough();

  app.add_option("--data.source", cfg.dataSource, "synthetic | cifar10");
  app.add_option("--data.dir", cfg.dataDir, "CIFAR-10 binary batch directory");
  app.add_option("--data.classes", cfg.classes, "synthetic class count");
  app.add_option("--data.perClass", cfg.perClass, "synthetic images per class");
  app.add_option("--data.imageSize", cfg.imageSize, "synthetic image side");
  app.add_option("--data.subsample", cfg.subsample, "random subset size (0 = all)");

  app.add_option("--run.seed", cfg.seed, "master seed (SELFAUG_SEED overrides)");
  app.add_option("--run.outDir", cfg.outDir, "run directory");
  app.add_option("--run.workers", cfg.workers, "worker threads");

  app.add_option("--moco.epochs", cfg.moco.epochs);
  app.add_option("--moco.batchSize", cfg.moco.batchSize);
  app.add_option("--moco.queueSize", cfg.moco.queueSize);
  app.add_option("--moco.momentum", cfg.moco.momentum);
  app.add_option("--moco.temperature", cfg.moco.temperature);
  app.add_option("--moco.lr", cfg.moco.sgd.lr);
  app.add_option("--moco.sgdMomentum", cfg.moco.sgd.momentum);
  app.add_option("--moco.weightDecay", cfg.moco.sgd.weightDecay);
  app.add_option("--moco.schedule", state.scheduleText, "epoch list, 10x drops (e.g. 120,160)");
  app.add_option("--moco.channels", state.channelsText, "conv block widths (e.g. 16,32,64,128)");
  app.add_option("--moco.strides", state.stridesText);
  app.add_option("--moco.projectionDim", cfg.moco.encoder.projectionDim);
  app.add_option("--moco.projectionHidden", cfg.moco.encoder.projectionHidden);
  app.add_flag("--moco.residualBlocks", cfg.moco.encoder.residualBlocks);

  app.add_option("--search.K", cfg.search.K);
  app.add_option("--search.T", cfg.search.T);
  app.add_option("--search.B", cfg.search.B);
  app.add_option("--search.P", cfg.search.P);
  app.add_option("--search.nTauSearch", cfg.search.nTauSearch);
  app.add_option("--search.loss", state.lossText,
                 "minRot | minInfo | maxInfo | minimax | weightedMinimax");
  app.add_option("--search.lambdaRot", cfg.search.lambdaRot);
  app.add_option("--search.lambdaNce", cfg.search.lambdaNce);
  app.add_option("--search.baseEpochFraction", cfg.search.baseEpochFraction);
  app.add_option("--search.gamma", cfg.search.tpe.gamma);
  app.add_option("--search.candidates", cfg.search.tpe.nCandidates);
  app.add_option("--search.startupTrials", cfg.search.tpe.nStartup);

  app.add_option("--probe.epochs", cfg.probe.epochs);
  app.add_option("--probe.batchSize", cfg.probe.batchSize);
  app.add_option("--probe.lr", cfg.probe.sgd.lr);
  app.add_option("--probe.schedule", state.probeScheduleText);
  app.add_option("--probe.holdout", cfg.probe.holdoutFraction);

  app.add_option("--randaugment.ntau", state.gridNTauText, "grid of nTau values");
  app.add_option("--randaugment.lambda", state.gridLambdaText, "grid of discrete magnitudes");

  auto* findBase = app.add_subcommand("find-base", "single-transform base policy sweep");
  auto* search = app.add_subcommand("search", "run the full policy search");
  search->add_option("--base-policy", state.basePolicyPath,
                     "existing base policy JSON (skips the sweep)");
  auto* pretrain = app.add_subcommand("pretrain", "contrastive pretraining");
  pretrain->add_option("--policy", state.policyPath, "policy JSON (empty: flip+crop only)");
  auto* probe = app.add_subcommand("probe", "linear probe on a frozen checkpoint");
  probe->add_option("--checkpoint", state.checkpointPath, "checkpoint path")->required();
  probe->add_option("--task", state.taskName, "rotation | jigsaw | supervised");
  auto* correlate = app.add_subcommand("correlate", "correlation study over a model spec file");
  correlate->add_option("--study", state.studyPath, "study spec JSON")->required();
  auto* randaugment = app.add_subcommand("randaugment", "grid search shared-magnitude policies");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (!state.configPath.empty()) {
      // Config file values fill in everything the command line left unset.
      auto entries = augsearch::readConfigFile(state.configPath);
      std::stable_sort(entries.begin(), entries.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      for (const auto& [key, value] : entries) {
        const CLI::Option* opt = nullptr;
        try {
          opt = app.get_option("--" + key);
        } catch (const CLI::OptionNotFound&) {
          opt = nullptr;
        }
        if (opt != nullptr && opt->count() > 0) continue;  // flags win
        augsearch::applyConfigEntry(state.cfg, key, value);
      }
    }
    applyTextOptions(state);
    if (findBase->parsed()) {
      augsearch::cmdFindBase(cfg);
    } else if (search->parsed()) {
      augsearch::cmdSearch(cfg, state.basePolicyPath);
    } else if (pretrain->parsed()) {
      augsearch::cmdPretrain(cfg, state.policyPath);
    } else if (probe->parsed()) {
      augsearch::cmdProbe(cfg, state.checkpointPath, state.taskName);
    } else if (correlate->parsed()) {
      augsearch::cmdCorrelate(cfg, state.studyPath);
    } else if (randaugment->parsed()) {
      augsearch::cmdRandAugment(cfg);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
