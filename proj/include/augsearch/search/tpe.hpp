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

#ifndef AUGSEARCH_SEARCH_TPE_HPP
#define AUGSEARCH_SEARCH_TPE_HPP

#include <vector>

#include "augsearch/core/rng.hpp"

namespace augsearch {

/// One coordinate of the search space: a categorical choice or a bounded
/// continuous value.
struct SearchSlot {
  enum class Kind { categorical, continuous };
  Kind kind = Kind::continuous;
  int categories = 0;
  double lo = 0.0;
  double hi = 1.0;

  static SearchSlot categorical(int k) { return {Kind::categorical, k, 0.0, 0.0}; }
  static SearchSlot continuous(double lo = 0.0, double hi = 1.0) {
    return {Kind::continuous, 0, lo, hi};
  }
};

struct TpeConfig {
  /// Quantile that separates good from bad trials (the EI threshold).
  double gamma = 0.25;
  /// Candidates drawn from the good-trial density per suggestion.
  int nCandidates = 24;
  /// Uniform random suggestions until this many trials exist.
  int nStartup = 5;
  /// Laplace smoothing for categorical frequency counts.
  double categoricalSmoothing = 1.0;
  /// Bandwidth floor as a fraction of each continuous range.
  double bandwidthFloor = 0.25;
};

struct TpeTrial {
  std::vector<double> x;  // one value per slot; categorical slots hold integers
  double score = 0.0;     // lower is better
};

/// Tree-structured Parzen estimator over a mixed categorical/continuous
/// space. Trials are split at the gamma-quantile into good and bad sets;
/// suggestions are drawn from the good-set density l(x) and ranked by the
/// ratio l(x)/g(x) (equivalent to the Expected Improvement ordering).
/// Continuous slots use truncated Gaussian kernels with Scott's-rule
/// bandwidths; categorical slots use smoothed frequency counts.
class TpeSampler {
public:
  TpeSampler(std::vector<SearchSlot> space, TpeConfig cfg);

  /// Proposes one candidate. With fewer than nStartup trials the suggestion
  /// is uniform over the space.
  std::vector<double> suggest(const std::vector<TpeTrial>& history, Rng& rng) const;

  std::vector<double> sampleUniform(Rng& rng) const;

  const std::vector<SearchSlot>& space() const { return space_; }

private:
  struct Density;

  std::vector<SearchSlot> space_;
  TpeConfig cfg_;
};

}  // namespace augsearch

#endif  // AUGSEARCH_SEARCH_TPE_HPP
