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

#include "augsearch/search/randaugment_search.hpp"

#include <iostream>

#include "augsearch/core/parallel.hpp"

namespace augsearch {

std::size_t pickBestGridPoint(const std::vector<EvalReport>& reports,
                              const std::vector<std::pair<int, int>>& grid) {
  AUGS_REQUIRE(reports.size() == grid.size(), "pickBestGridPoint: reports and grid must align");
  std::size_t best = reports.size();
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (reports[i].rotationTop1 < 0.0) continue;  // diverged sentinel
    if (best == reports.size()) {
      best = i;
      continue;
    }
    const double cur = reports[i].rotationTop1;
    const double top = reports[best].rotationTop1;
    if (cur > top || (cur == top && grid[i] < grid[best])) best = i;
  }
  AUGS_REQUIRE(best < reports.size(), "pickBestGridPoint: every grid point diverged");
  return best;
}

RandAugmentGridResult runSelfRandAugment(const Dataset& dataset,
                                         const std::vector<std::pair<int, int>>& grid,
                                         const MocoConfig& mocoCfg, const ProbeConfig& probeCfg,
                                         std::uint64_t seed, int workers,
                                         const std::vector<OpId>& opSubset) {
  AUGS_REQUIRE(!grid.empty(), "runSelfRandAugment: empty grid");
  mocoCfg.validate();
  const std::vector<OpId> ops =
      opSubset.empty() ? std::vector<OpId>(kSearchableOps.begin(), kSearchableOps.end())
                       : opSubset;
  std::vector<EvalReport> reports(grid.size());
  const Rng root(seed);
  parallelFor(grid.size(), workers, [&](std::size_t i) {
    const auto [nTau, lambda] = grid[i];
    RandAugmentConfig cfg;
    cfg.nTau = nTau;
    cfg.lambdaDiscrete = lambda;
    cfg.opSubset = ops;
    const Policy policy = makeRandaugmentPolicy(cfg);
    EvalReport& report = reports[i];
    report.modelId = policy.name;
    report.policyName = policy.name;
    report.epochs = mocoCfg.epochs;
    report.seed = root.fork(0x5261 + i).nextU64() >> 8;
    try {
      const auto trained = trainMoco(dataset, policy, mocoCfg, report.seed);
      report.infoNceFinal = trained.log.back().loss;
      report.contrastiveTop1 = trained.log.back().contrastiveTop1;
      report.rotationTop1 = trainProbe(trained.state.query, ProbeTask::rotation(), dataset,
                                       probeCfg, root.fork(0x7072 + i).nextU64() >> 8)
                                .top1;
    } catch (const std::exception& e) {
      report.rotationTop1 = -1.0;  // sentinel: excluded from the argmax
      std::cerr << "randaugment grid point (" << nTau << ", " << lambda
                << ") diverged: " << e.what() << "\n";
    }
  });
  RandAugmentGridResult result;
  const std::size_t best = pickBestGridPoint(reports, grid);
  result.best.nTau = grid[best].first;
  result.best.lambdaDiscrete = grid[best].second;
  result.best.opSubset = ops;
  result.reports = std::move(reports);
  return result;
}

}  // namespace augsearch
