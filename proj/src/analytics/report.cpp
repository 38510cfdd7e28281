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

#include "augsearch/analytics/report.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>

#include "augsearch/analytics/stats.hpp"
#include "augsearch/core/parallel.hpp"

namespace augsearch {

namespace {

std::string f6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

void emitReports(const std::vector<EvalReport>& reports, const std::string& path,
                 ReportFormat format) {
  AUGS_REQUIRE(!reports.empty(), "emitReports: no reports");
  std::ofstream out(path);
  if (!out) throw IoError("emitReports: cannot write " + path);
  if (format == ReportFormat::csv) {
    out << "modelId,policyName,rotationTop1,jigsawTop1,supervisedTop1,infoNce,"
           "contrastiveTop1,epochs,seed\n";
    for (const auto& r : reports) {
      out << r.modelId << "," << r.policyName << "," << f6(r.rotationTop1) << ","
          << (r.jigsawTop1 ? f6(*r.jigsawTop1) : "") << ","
          << (r.supervisedTop1 ? f6(*r.supervisedTop1) : "") << "," << f6(r.infoNceFinal) << ","
          << f6(r.contrastiveTop1) << "," << r.epochs << "," << r.seed << "\n";
    }
  } else {
    for (const auto& r : reports) {
      out << "{\"modelId\":\"" << r.modelId << "\",\"policyName\":\"" << r.policyName
          << "\",\"rotationTop1\":" << f6(r.rotationTop1);
      if (r.jigsawTop1) out << ",\"jigsawTop1\":" << f6(*r.jigsawTop1);
      if (r.supervisedTop1) out << ",\"supervisedTop1\":" << f6(*r.supervisedTop1);
      out << ",\"infoNce\":" << f6(r.infoNceFinal)
          << ",\"contrastiveTop1\":" << f6(r.contrastiveTop1) << ",\"epochs\":" << r.epochs
          << ",\"seed\":" << r.seed << "}\n";
    }
  }
  if (!out) throw IoError("emitReports: write failed for " + path);
}

CorrelationResult runCorrelationStudy(const std::vector<StudySpec>& specs, const Dataset& dataset,
                                      const CorrelationConfig& cfg, std::uint64_t seed) {
  AUGS_REQUIRE(specs.size() >= 3, "runCorrelationStudy: need at least 3 model specs");
  AUGS_REQUIRE(dataset.labels.has_value(),
               "runCorrelationStudy: the supervised probe needs labels");

  struct Slot {
    bool ok = false;
    std::string error;
    EvalReport report;
  };
  std::vector<Slot> slots(specs.size());
  const Rng root(seed);

  parallelFor(specs.size(), cfg.workers, [&](std::size_t i) {
    const StudySpec& spec = specs[i];
    Slot& slot = slots[i];
    try {
      MocoConfig moco = cfg.moco;
      moco.epochs = spec.epochs;
      // Seeds depend on the spec itself: identical specs train identically.
      const std::uint64_t modelSeed =
          root.fork(fnv1a(spec.name) ^ static_cast<std::uint64_t>(spec.epochs)).nextU64() >> 8;

      std::unique_ptr<ViewAugmenter> augmenter;
      switch (spec.kind) {
        case StudySpec::Kind::baseOnly:
          augmenter = std::make_unique<BasePipeline>();
          break;
        case StudySpec::Kind::singleOp:
          augmenter = std::make_unique<SingleOpAugmenter>(spec.op);
          break;
        case StudySpec::Kind::policy:
          augmenter = std::make_unique<PolicyAugmenter>(spec.policy);
          break;
      }
      const auto trained = trainMoco(dataset, *augmenter, moco, modelSeed);

      EvalReport report;
      report.modelId = spec.name;
      report.policyName = spec.kind == StudySpec::Kind::policy ? spec.policy.name
                          : spec.kind == StudySpec::Kind::singleOp ? opName(spec.op)
                                                                   : "base";
      report.epochs = spec.epochs;
      report.seed = modelSeed;
      report.infoNceFinal = trained.log.back().loss;
      report.contrastiveTop1 = trained.log.back().contrastiveTop1;
      const Rng probeRoot(modelSeed);
      report.rotationTop1 =
          trainProbe(trained.state.query, ProbeTask::rotation(), dataset, cfg.probe,
                     probeRoot.fork(1).nextU64())
              .top1;
      if (cfg.runJigsaw) {
        report.jigsawTop1 = trainProbe(trained.state.query, ProbeTask::jigsaw(), dataset,
                                       cfg.probe, probeRoot.fork(2).nextU64())
                                .top1;
      }
      report.supervisedTop1 =
          trainProbe(trained.state.query, ProbeTask::supervised(dataset.numClasses), dataset,
                     cfg.probe, probeRoot.fork(3).nextU64())
              .top1;
      slot.report = std::move(report);
      slot.ok = true;
    } catch (const std::exception& e) {
      slot.error = e.what();
    }
  });

  CorrelationResult result;
  std::vector<double> rot, jig, sup;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (!slots[i].ok) {
      std::cerr << "correlation study: model \"" << specs[i].name << "\" failed: "
                << slots[i].error << "\n";
      continue;
    }
    result.reports.push_back(slots[i].report);
    rot.push_back(slots[i].report.rotationTop1);
    if (slots[i].report.jigsawTop1) jig.push_back(*slots[i].report.jigsawTop1);
    sup.push_back(*slots[i].report.supervisedTop1);
  }
  if (result.reports.size() < 3) {
    throw Error("runCorrelationStudy: fewer than 3 models trained successfully");
  }
  result.rhoRotation = spearman(rot, sup);
  result.rhoJigsaw = jig.size() == sup.size() ? spearman(jig, sup) : 0.0;
  return result;
}

}  // namespace augsearch
