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

#ifndef AUGSEARCH_ANALYTICS_REPORT_HPP
#define AUGSEARCH_ANALYTICS_REPORT_HPP

#include <optional>
#include <string>
#include <vector>

#include "augsearch/contrastive/moco.hpp"
#include "augsearch/sseval/probe.hpp"

namespace augsearch {

/// One pretrained model's evaluation record.
struct EvalReport {
  std::string modelId;
  std::string policyName;
  double rotationTop1 = 0.0;
  std::optional<double> jigsawTop1;
  std::optional<double> supervisedTop1;
  double infoNceFinal = 0.0;
  double contrastiveTop1 = 0.0;
  int epochs = 0;
  std::uint64_t seed = 0;
};

enum class ReportFormat { csv, jsonl };

/// Writes scatter-ready rows, one per model, deterministic column order.
/// CSV header:
/// modelId,policyName,rotationTop1,jigsawTop1,supervisedTop1,infoNce,contrastiveTop1,epochs,seed
void emitReports(const std::vector<EvalReport>& reports, const std::string& path,
                 ReportFormat format);

/// One model of the correlation study: how to augment and how long to train.
struct StudySpec {
  enum class Kind { baseOnly, singleOp, policy };
  std::string name;
  Kind kind = Kind::baseOnly;
  OpId op = OpId::invert;  // used when kind == singleOp
  Policy policy;           // used when kind == policy
  int epochs = 20;
};

struct CorrelationConfig {
  MocoConfig moco;       // epochs are overridden per spec
  ProbeConfig probe;
  bool runJigsaw = true;
  int workers = 1;
};

struct CorrelationResult {
  std::vector<EvalReport> reports;
  double rhoRotation = 0.0;
  double rhoJigsaw = 0.0;
};

/// Trains one MoCo model per spec, probes rotation / jigsaw / supervised on
/// the frozen backbone, and returns the Spearman correlation of each
/// self-supervised metric against the supervised probe. Requires at least 3
/// successful models; per-model seeds derive from the spec name and epoch
/// count, so identical specs train identical models.
CorrelationResult runCorrelationStudy(const std::vector<StudySpec>& specs, const Dataset& dataset,
                                      const CorrelationConfig& cfg, std::uint64_t seed);

}  // namespace augsearch

#endif  // AUGSEARCH_ANALYTICS_REPORT_HPP
