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

#ifndef AUGSEARCH_ANALYTICS_STATS_HPP
#define AUGSEARCH_ANALYTICS_STATS_HPP

#include <vector>

#include "augsearch/core/tensor.hpp"

namespace augsearch {

/// Spearman rank correlation with average-rank tie handling: Pearson
/// correlation of the two rank vectors. Needs at least 3 points; a constant
/// input vector has no defined correlation and throws.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

/// Modified RV coefficient over [N, D] activation matrices: Gram matrices
/// with their diagonals removed,
///   RV2 = <Gx, Gy> / sqrt(<Gx, Gx> <Gy, Gy>).
/// Row counts must match; zero-norm Gram matrices throw.
double rv2(const Tensor& x, const Tensor& y);

}  // namespace augsearch

#endif  // AUGSEARCH_ANALYTICS_STATS_HPP
