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

#ifndef AUGSEARCH_CONTRASTIVE_INFONCE_HPP
#define AUGSEARCH_CONTRASTIVE_INFONCE_HPP

#include <algorithm>
#include <cmath>

#include "augsearch/core/tensor.hpp"

namespace augsearch {

template <typename S>
struct InfoNceResult {
  double loss = 0.0;  // mean (K+1)-way cross-entropy, positive at index 0
  double top1 = 0.0;  // fraction of samples whose highest logit is the positive
  TensorT<S> dq;      // gradient of the loss with respect to q
};

/// InfoNCE over unit-norm rows: per-sample logits are
/// [q.kPos, q.queue_1, ..., q.queue_K] / t and the loss is the mean
/// cross-entropy with the positive at index 0 (the positive pair is part of
/// the softmax). Argmax ties resolve to the positive.
template <typename S>
InfoNceResult<S> infonceLoss(const TensorT<S>& q, const TensorT<S>& kPos, const TensorT<S>& queue,
                             double temperature, bool wantGrad = false) {
  AUGS_REQUIRE(temperature > 0.0, "infonceLoss: temperature must be positive");
  AUGS_REQUIRE(q.rank() == 2 && kPos.rank() == 2 && queue.rank() == 2,
               "infonceLoss: expected [N,d] and [K,d] inputs");
  AUGS_REQUIRE(q.shape == kPos.shape, "infonceLoss: q and kPos shapes differ");
  AUGS_REQUIRE(q.dim(1) == queue.dim(1), "infonceLoss: queue feature dim mismatch");
  const int n = q.dim(0);
  const int d = q.dim(1);
  const int k = queue.dim(0);

  auto requireUnitRows = [&](const TensorT<S>& m, const char* label) {
    for (int i = 0; i < m.dim(0); ++i) {
      double acc = 0.0;
      const S* row = m.data.data() + m.offset({i, 0});
      for (int j = 0; j < d; ++j) acc += static_cast<double>(row[j]) * row[j];
      if (std::abs(std::sqrt(acc) - 1.0) > 1e-3) {
        throw ContractError(std::string("infonceLoss: ") + label + " row " + std::to_string(i) +
                            " is not unit-norm");
      }
    }
  };
  requireUnitRows(q, "q");
  requireUnitRows(kPos, "kPos");
  requireUnitRows(queue, "queue");

  InfoNceResult<S> out;
  if (wantGrad) out.dq = TensorT<S>({n, d});
  double lossAcc = 0.0;
  int hits = 0;
  std::vector<double> logits(static_cast<std::size_t>(k) + 1);
  std::vector<double> probs(static_cast<std::size_t>(k) + 1);
  for (int i = 0; i < n; ++i) {
    const S* qi = q.data.data() + q.offset({i, 0});
    const S* ki = kPos.data.data() + kPos.offset({i, 0});
    double dot = 0.0;
    for (int j = 0; j < d; ++j) dot += static_cast<double>(qi[j]) * ki[j];
    logits[0] = dot / temperature;
    for (int r = 0; r < k; ++r) {
      const S* qr = queue.data.data() + queue.offset({r, 0});
      double acc = 0.0;
      for (int j = 0; j < d; ++j) acc += static_cast<double>(qi[j]) * qr[j];
      logits[static_cast<std::size_t>(r) + 1] = acc / temperature;
    }
    const double maxv = *std::max_element(logits.begin(), logits.end());
    double denom = 0.0;
    for (double v : logits) denom += std::exp(v - maxv);
    const double logZ = maxv + std::log(denom);
    lossAcc += logZ - logits[0];
    // The positive wins ties: count a hit unless some distractor is strictly larger.
    bool beaten = false;
    for (std::size_t r = 1; r < logits.size(); ++r) beaten = beaten || logits[r] > logits[0];
    hits += !beaten;
    if (wantGrad) {
      for (std::size_t r = 0; r < logits.size(); ++r) probs[r] = std::exp(logits[r] - logZ);
      S* dqi = out.dq.data.data() + out.dq.offset({i, 0});
      const double scale = 1.0 / (static_cast<double>(n) * temperature);
      for (int j = 0; j < d; ++j) {
        double acc = (probs[0] - 1.0) * ki[j];
        for (int r = 0; r < k; ++r) {
          acc += probs[static_cast<std::size_t>(r) + 1] * queue.data[queue.offset({r, j})];
        }
        dqi[j] = static_cast<S>(acc * scale);
      }
    }
  }
  out.loss = lossAcc / n;
  out.top1 = static_cast<double>(hits) / n;
  AUGS_REQUIRE(std::isfinite(out.loss), "infonceLoss: non-finite loss");
  return out;
}

}  // namespace augsearch

#endif  // AUGSEARCH_CONTRASTIVE_INFONCE_HPP
