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

#ifndef AUGSEARCH_CONTRASTIVE_MOCO_HPP
#define AUGSEARCH_CONTRASTIVE_MOCO_HPP

#include <string>
#include <vector>

#include "augsearch/contrastive/infonce.hpp"
#include "augsearch/dataio/dataset.hpp"
#include "augsearch/nn/checkpoint.hpp"
#include "augsearch/nn/encoder.hpp"
#include "augsearch/nn/sgd.hpp"
#include "augsearch/policy/augmenter.hpp"

namespace augsearch {

struct MocoConfig {
  int queueSize = 512;
  double momentum = 0.99;
  double temperature = 0.2;
  int epochs = 20;
  int batchSize = 64;
  SgdConfig sgd;
  EncoderConfig encoder;
  /// Threads used to augment the two views of a batch.
  int workers = 1;

  void validate() const {
    AUGS_REQUIRE(momentum >= 0.0 && momentum <= 1.0, "MocoConfig: momentum outside [0,1]");
    AUGS_REQUIRE(temperature > 0.0, "MocoConfig: temperature must be positive");
    AUGS_REQUIRE(epochs >= 1 && batchSize >= 1, "MocoConfig: epochs and batchSize must be >= 1");
    AUGS_REQUIRE(queueSize >= 1 && queueSize % batchSize == 0,
                 "MocoConfig: queueSize must be a positive multiple of batchSize");
    sgd.validate();
    encoder.validate();
  }
};

/// Query encoder, momentum (key) encoder, negative-key queue and its cursor.
struct EncoderState {
  Encoder<float> query;
  Encoder<float> key;
  Tensor queue;  // [queueSize, projectionDim], unit rows
  int cursor = 0;
};

struct EpochLog {
  int epoch = 0;
  double loss = 0.0;
  double contrastiveTop1 = 0.0;
  double wallSeconds = 0.0;
};

struct MocoTrainResult {
  EncoderState state;
  std::vector<EpochLog> log;
};

/// theta_k <- m * theta_k + (1 - m) * theta_q over every matching parameter.
void momentumUpdate(Encoder<float>& query, Encoder<float>& key, double m);

/// Writes the key rows at [cursor, cursor + N) with wraparound and advances
/// the cursor mod queueSize. Keys must be unit rows.
void enqueue(EncoderState& state, const Tensor& keys);

/// Builds a fresh state: key parameters copied from the query, queue filled
/// with seed-derived random unit rows.
EncoderState makeEncoderState(const MocoConfig& cfg, std::uint64_t seed);

/// MoCo pretraining. Each batch draws two independent augmented views per
/// image, steps the query encoder on the InfoNCE gradient, momentum-updates
/// the key encoder and enqueues the keys. Deterministic per seed for any
/// worker count. Non-finite loss aborts with a diagnostic.
MocoTrainResult trainMoco(const Dataset& dataset, const ViewAugmenter& augmenter,
                          const MocoConfig& cfg, std::uint64_t seed);

/// Convenience overload: base pipeline (flip + crop) followed by the policy.
MocoTrainResult trainMoco(const Dataset& dataset, const Policy& policy, const MocoConfig& cfg,
                          std::uint64_t seed);

/// Flattens an encoder state to checkpoint tensors ("query/...", "key/...",
/// "queue", "cursor") and back.
std::vector<NamedTensor> encoderStateTensors(EncoderState& state);
EncoderState encoderStateFromTensors(const MocoConfig& cfg,
                                     const std::vector<NamedTensor>& tensors);

/// Writes one JSON object per epoch: {epoch, loss, contrastiveTop1,
/// wallSeconds}.
void writeTrainingLog(const std::string& path, const std::vector<EpochLog>& log);

}  // namespace augsearch

#endif  // AUGSEARCH_CONTRASTIVE_MOCO_HPP
