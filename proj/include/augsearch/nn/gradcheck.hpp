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

#ifndef AUGSEARCH_NN_GRADCHECK_HPP
#define AUGSEARCH_NN_GRADCHECK_HPP

#include <functional>

#include "augsearch/core/rng.hpp"
#include "augsearch/nn/layers.hpp"

namespace augsearch {

/// Compares the analytic gradients already stored in `params` against
/// central finite differences of `lossFn` over a random subsample of each
/// parameter tensor. Returns the maximum relative error.
///
/// The caller runs the analytic backward pass first; this function then only
/// perturbs parameters and re-evaluates the loss. Runs on the double
/// instantiation of the model so the finite differences are trustworthy.
inline double gradCheck(std::vector<ParamView<double>>& params,
                        const std::function<double()>& lossFn, double eps,
                        int samplesPerTensor, Rng& rng) {
  AUGS_REQUIRE(eps >= 1e-6 && eps <= 1e-2, "gradCheck: eps outside [1e-6, 1e-2]");
  double maxRel = 0.0;
  for (auto& p : params) {
    const int count = static_cast<int>(p.value->data.size());
    for (int s = 0; s < samplesPerTensor; ++s) {
      const int idx = rng.uniformInt(count);
      double& theta = p.value->data[static_cast<std::size_t>(idx)];
      const double saved = theta;
      theta = saved + eps;
      const double lossPlus = lossFn();
      theta = saved - eps;
      const double lossMinus = lossFn();
      theta = saved;
      const double fd = (lossPlus - lossMinus) / (2.0 * eps);
      const double analytic = p.grad->data[static_cast<std::size_t>(idx)];
      const double denom = std::max(std::abs(fd) + std::abs(analytic), 1e-6);
      maxRel = std::max(maxRel, std::abs(fd - analytic) / denom);
    }
  }
  return maxRel;
}

}  // namespace augsearch

#endif  // AUGSEARCH_NN_GRADCHECK_HPP
