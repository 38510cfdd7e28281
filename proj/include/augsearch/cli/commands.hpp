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

#ifndef AUGSEARCH_CLI_COMMANDS_HPP
#define AUGSEARCH_CLI_COMMANDS_HPP

#include "augsearch/cli/run_config.hpp"

namespace augsearch {

/// Every command writes its artifacts plus resolved_config.toml and
/// manifest.json into cfg.outDir. Throws on failure; the caller maps
/// exceptions to exit codes.

/// Single-transform sweep; writes base_policy.json and base_reports.csv.
void cmdFindBase(const RunConfig& cfg);

/// Full Algorithm 1; writes final_policy.json, trials.jsonl and
/// base_policy.json. basePolicyPath, when non-empty, switches to the
/// fixed-base mode.
void cmdSearch(const RunConfig& cfg, const std::string& basePolicyPath);

/// MoCo pretraining with the policy at policyPath (empty: flip + crop base
/// pipeline only); writes checkpoint.bin and train_log.jsonl.
void cmdPretrain(const RunConfig& cfg, const std::string& policyPath);

/// Probes a checkpoint on the frozen backbone; writes report.json.
void cmdProbe(const RunConfig& cfg, const std::string& checkpointPath, const std::string& task);

/// Correlation study over a spec file; writes reports.csv, reports.jsonl and
/// correlations.json.
void cmdCorrelate(const RunConfig& cfg, const std::string& studyPath);

/// SelfRandAugment grid search; writes best_randaugment.json and
/// randaugment_reports.csv.
void cmdRandAugment(const RunConfig& cfg);

}  // namespace augsearch

#endif  // AUGSEARCH_CLI_COMMANDS_HPP
