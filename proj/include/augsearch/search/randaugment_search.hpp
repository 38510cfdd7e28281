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

#ifndef AUGSEARCH_SEARCH_RANDAUGMENT_SEARCH_HPP
#define AUGSEARCH_SEARCH_RANDAUGMENT_SEARCH_HPP

#include <utility>
#include <vector>

#include "augsearch/analytics/report.hpp"

namespace augsearch {

struct RandAugmentGridResult {
  RandAugmentConfig best;
  std::vector<EvalReport> reports;  // one per grid point, in grid order
};

/// Grid search over (nTau, lambdaDiscrete): pretrains with the RandAugment
/// policy on top of the base pipeline, probes rotation on the frozen
/// backbone, and returns the configuration with the highest rotation
/// accuracy. Diverged points carry rotationTop1 = -1 and never win. Ties
/// break toward the lexicographically smaller (nTau, lambda).
RandAugmentGridResult runSelfRandAugment(const Dataset& dataset,
                                         const std::vector<std::pair<int, int>>& grid,
                                         const MocoConfig& mocoCfg, const ProbeConfig& probeCfg,
                                         std::uint64_t seed, int workers = 1,
                                         const std::vector<OpId>& opSubset = {});

/// Exposed for the tie-break contract: index of the winning grid point.
std::size_t pickBestGridPoint(const std::vector<EvalReport>& reports,
                              const std::vector<std::pair<int, int>>& grid);

}  // namespace augsearch

#endif  // AUGSEARCH_SEARCH_RANDAUGMENT_SEARCH_HPP
