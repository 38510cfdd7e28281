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

#ifndef AUGSEARCH_SSEVAL_PROBE_HPP
#define AUGSEARCH_SSEVAL_PROBE_HPP

#include "augsearch/dataio/dataset.hpp"
#include "augsearch/nn/encoder.hpp"
#include "augsearch/nn/sgd.hpp"
#include "augsearch/sseval/tasks.hpp"

namespace augsearch {

struct ProbeConfig {
  SgdConfig sgd = {.lr = 0.5, .momentum = 0.9, .weightDecay = 0.0, .schedule = {{20, 0.1}, {30, 0.1}}};
  int epochs = 50;
  int batchSize = 256;
  /// Fraction of the *images* held out for evaluation; task expansion never
  /// mixes one image across the two sides.
  double holdoutFraction = 0.2;
  /// Batch size for frozen feature extraction.
  int featureBatch = 64;
  /// Ablation only: 2-layer MLP head instead of the linear probe.
  bool mlpHead = false;
  int mlpHidden = 128;
};

struct ProbeResult {
  ProbeTask task;
  double top1 = 0.0;      // held-out accuracy
  double evalLoss = 0.0;  // held-out cross-entropy
  double trainTop1 = 0.0;
  Linear<float> head;
};

/// Forward-only feature extraction through a copy of the encoder, in fixed
/// deterministic batches. Returns [N, featureDim].
Tensor extractFeatures(const Encoder<float>& encoder, const std::vector<Image>& imgs,
                       int batchSize);

/// Trains only the probe head by cross-entropy on (input, label) pairs
/// derived from the task; the backbone stays frozen. top1 and evalLoss come
/// from held-out images the optimizer never saw.
ProbeResult trainProbe(const Encoder<float>& frozen, ProbeTask task, const Dataset& trainData,
                       const ProbeConfig& cfg, std::uint64_t seed);

}  // namespace augsearch

#endif  // AUGSEARCH_SSEVAL_PROBE_HPP
