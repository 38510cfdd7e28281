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

#ifndef AUGSEARCH_NN_LOSS_HPP
#define AUGSEARCH_NN_LOSS_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "augsearch/core/tensor.hpp"

namespace augsearch {

template <typename S>
struct CrossEntropyResult {
  double loss = 0.0;   // mean over the batch
  double top1 = 0.0;   // fraction of samples whose argmax matches the label
  TensorT<S> grad;     // d(loss)/d(logits)
};

/// Softmax cross-entropy over [N, C] logits with integer labels. Reductions
/// accumulate in double. Ties in the argmax resolve to the lowest index.
template <typename S>
CrossEntropyResult<S> softmaxCrossEntropy(const TensorT<S>& logits, const std::vector<int>& labels) {
  AUGS_REQUIRE(logits.rank() == 2, "softmaxCrossEntropy: expected [N,C] logits");
  const int n = logits.dim(0);
  const int c = logits.dim(1);
  AUGS_REQUIRE(static_cast<std::size_t>(n) == labels.size(),
               "softmaxCrossEntropy: label count mismatch");
  CrossEntropyResult<S> out;
  out.grad = TensorT<S>(logits.shape);
  double lossAcc = 0.0;
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    const int label = labels[static_cast<std::size_t>(i)];
    AUGS_REQUIRE(label >= 0 && label < c, "softmaxCrossEntropy: label out of range");
    const S* row = logits.data.data() + logits.offset({i, 0});
    double maxv = row[0];
    int arg = 0;
    for (int j = 1; j < c; ++j) {
      if (row[j] > maxv) {
        maxv = row[j];
        arg = j;
      }
    }
    double denom = 0.0;
    for (int j = 0; j < c; ++j) denom += std::exp(static_cast<double>(row[j]) - maxv);
    const double logZ = maxv + std::log(denom);
    lossAcc += logZ - row[label];
    hits += arg == label;
    S* grow = out.grad.data.data() + out.grad.offset({i, 0});
    for (int j = 0; j < c; ++j) {
      const double p = std::exp(static_cast<double>(row[j]) - logZ);
      grow[j] = static_cast<S>((p - (j == label ? 1.0 : 0.0)) / n);
    }
  }
  out.loss = lossAcc / n;
  out.top1 = static_cast<double>(hits) / n;
  AUGS_REQUIRE(std::isfinite(out.loss), "softmaxCrossEntropy: non-finite loss");
  return out;
}

}  // namespace augsearch

#endif  // AUGSEARCH_NN_LOSS_HPP
