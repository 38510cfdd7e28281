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

#ifndef AUGSEARCH_CLI_RUN_CONFIG_HPP
#define AUGSEARCH_CLI_RUN_CONFIG_HPP

#include <string>
#include <vector>

#include "augsearch/dataio/dataset.hpp"
#include "augsearch/search/selfaugment.hpp"

namespace augsearch {

/// Fully resolved run settings. Defaults form the desk-scale profile; the
/// "paper" profile in configs/ overrides with full-scale values.
struct RunConfig {
  // [data]
  std::string dataSource = "synthetic";  // synthetic | cifar10
  std::string dataDir = "data/cifar-10-batches-bin";
  int classes = 5;
  int perClass = 120;
  int imageSize = 20;
  int subsample = 0;  // 0: whole dataset

  // [run]
  std::uint64_t seed = 1;
  std::string outDir = "runs/latest";
  int workers = 2;

  // [moco] + [encoder] + [sgd]
  MocoConfig moco;

  // [search]
  SearchConfig search;

  // [probe]
  ProbeConfig probe;

  // [randaugment]
  std::vector<int> gridNTau = {1, 2, 3};
  std::vector<int> gridLambda = {4, 5, 7, 9, 11};

  void validate() const;
};

/// Loads the configured dataset (synthetic generator or CIFAR-10 binaries),
/// applying the optional subsample.
Dataset loadConfiguredDataset(const RunConfig& cfg);

/// Serializes every resolved setting as the TOML-style document the CLI
/// accepts back. Byte-stable for reproducibility manifests.
std::string resolvedConfigToml(const RunConfig& cfg);

/// Parses "a,b,c" into integers.
std::vector<int> parseIntList(const std::string& text);

/// Parses a step schedule: "120,160" drops the rate 10x at those epochs;
/// "30:0.5,60:0.1" gives explicit multipliers.
std::vector<std::pair<int, double>> parseSchedule(const std::string& text);

/// Reads a TOML-style document of [section] blocks with key=value lines into
/// "section.key" -> value entries. Comments (#) and blank lines are ignored.
std::vector<std::pair<std::string, std::string>> readConfigFile(const std::string& path);

/// Applies one "section.key" entry onto the config. Unknown keys raise
/// ParseError naming the key. (Entries should be applied in sorted key
/// order so moco.channels precedes moco.strides.)
void applyConfigEntry(RunConfig& cfg, const std::string& key, const std::string& value);

}  // namespace augsearch

#endif  // AUGSEARCH_CLI_RUN_CONFIG_HPP
