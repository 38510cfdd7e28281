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

#include "augsearch/contrastive/moco.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>

#include "augsearch/core/parallel.hpp"

namespace augsearch {

void momentumUpdate(Encoder<float>& query, Encoder<float>& key, double m) {
  AUGS_REQUIRE(m >= 0.0 && m <= 1.0, "momentumUpdate: m outside [0,1]");
  auto qp = query.params();
  auto kp = key.params();
  AUGS_REQUIRE(qp.size() == kp.size(), "momentumUpdate: parameter count mismatch");
  for (std::size_t i = 0; i < qp.size(); ++i) {
    AUGS_REQUIRE(qp[i].value->shape == kp[i].value->shape,
                 "momentumUpdate: shape mismatch at " + qp[i].name);
    auto& q = qp[i].value->data;
    auto& k = kp[i].value->data;
    for (std::size_t j = 0; j < q.size(); ++j) {
      k[j] = static_cast<float>(m * k[j] + (1.0 - m) * q[j]);
    }
  }
}

void enqueue(EncoderState& state, const Tensor& keys) {
  AUGS_REQUIRE(keys.rank() == 2 && keys.dim(1) == state.queue.dim(1),
               "enqueue: key shape mismatch");
  const int n = keys.dim(0);
  const int capacity = state.queue.dim(0);
  AUGS_REQUIRE(n >= 1 && capacity % n == 0, "enqueue: batch size must divide queue size");
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < keys.dim(1); ++j) {
      const float v = keys.at({i, j});
      acc += static_cast<double>(v) * v;
    }
    AUGS_REQUIRE(std::abs(std::sqrt(acc) - 1.0) <= 1e-4, "enqueue: key row is not unit-norm");
  }
  for (int i = 0; i < n; ++i) {
    const int row = (state.cursor + i) % capacity;
    for (int j = 0; j < keys.dim(1); ++j) {
      state.queue.at({row, j}) = keys.at({i, j});
    }
  }
  state.cursor = (state.cursor + n) % capacity;
}

EncoderState makeEncoderState(const MocoConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  EncoderState state;
  state.query = Encoder<float>(cfg.encoder);
  Rng initRng = Rng(seed).fork(0x696e6974);
  state.query.init(initRng);
  state.key = state.query;
  state.queue = Tensor({cfg.queueSize, cfg.encoder.projectionDim});
  Rng queueRng = Rng(seed).fork(0x7175);
  for (int r = 0; r < cfg.queueSize; ++r) {
    double acc = 0.0;
    std::vector<double> row(static_cast<std::size_t>(cfg.encoder.projectionDim));
    for (auto& v : row) {
      v = queueRng.normal();
      acc += v * v;
    }
    const double norm = std::max(std::sqrt(acc), 1e-12);
    for (int j = 0; j < cfg.encoder.projectionDim; ++j) {
      state.queue.at({r, j}) = static_cast<float>(row[static_cast<std::size_t>(j)] / norm);
    }
  }
  state.cursor = 0;
  return state;
}

MocoTrainResult trainMoco(const Dataset& dataset, const ViewAugmenter& augmenter,
                          const MocoConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  AUGS_REQUIRE(!dataset.images.empty(), "trainMoco: empty dataset");
  AUGS_REQUIRE(static_cast<std::size_t>(cfg.batchSize) <= dataset.size(),
               "trainMoco: batch size exceeds dataset size");

  MocoTrainResult result;
  result.state = makeEncoderState(cfg, seed);
  EncoderState& state = result.state;
  auto queryParams = state.query.params();
  SgdOptimizer<float> optimizer(cfg.sgd);
  const Rng root(seed);

  const int n = static_cast<int>(dataset.size());
  const int batches = n / cfg.batchSize;  // partial tail batches are dropped
  AUGS_REQUIRE(batches >= 1, "trainMoco: dataset smaller than one batch");
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto epochStart = std::chrono::steady_clock::now();
    Rng shuffleRng = root.fork(0x73680000ULL + static_cast<std::uint64_t>(epoch));
    for (int i = n - 1; i > 0; --i) {
      std::swap(order[static_cast<std::size_t>(i)],
                order[static_cast<std::size_t>(shuffleRng.uniformInt(i + 1))]);
    }
    double lossAcc = 0.0;
    double top1Acc = 0.0;
    for (int b = 0; b < batches; ++b) {
      std::vector<Tensor> qViews(static_cast<std::size_t>(cfg.batchSize));
      std::vector<Tensor> kViews(static_cast<std::size_t>(cfg.batchSize));
      const std::uint64_t stepLabel =
          (static_cast<std::uint64_t>(epoch) * static_cast<std::uint64_t>(batches) + b);
      parallelFor(static_cast<std::size_t>(cfg.batchSize), cfg.workers, [&](std::size_t slot) {
        const int imgIdx = order[static_cast<std::size_t>(b) * cfg.batchSize + slot];
        const std::uint64_t label = (stepLabel * cfg.batchSize + slot) * 2;
        Rng rngQ = root.fork(0xa0000000ULL + label);
        Rng rngK = root.fork(0xa0000000ULL + label + 1);
        qViews[slot] = augmenter.apply(dataset.images[static_cast<std::size_t>(imgIdx)], rngQ).pix;
        kViews[slot] = augmenter.apply(dataset.images[static_cast<std::size_t>(imgIdx)], rngK).pix;
      });
      const Tensor qBatch = stackImages<float>(qViews);
      const Tensor kBatch = stackImages<float>(kViews);

      auto qOut = state.query.forward(qBatch);
      auto kOut = state.key.forward(kBatch);
      InfoNceResult<float> nce;
      try {
        nce = infonceLoss<float>(qOut.projections, kOut.projections, state.queue,
                                 cfg.temperature, true);
      } catch (const ContractError& e) {
        throw Error("trainMoco: diverged at epoch " + std::to_string(epoch) + " batch " +
                    std::to_string(b) + ": " + e.what());
      }
      state.query.zeroGrad();
      state.query.backwardFromProjections(nce.dq);
      optimizer.step(queryParams, epoch);
      momentumUpdate(state.query, state.key, cfg.momentum);
      enqueue(state, kOut.projections);
      lossAcc += nce.loss;
      top1Acc += nce.top1;
    }
    EpochLog entry;
    entry.epoch = epoch;
    entry.loss = lossAcc / batches;
    entry.contrastiveTop1 = top1Acc / batches;
    entry.wallSeconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - epochStart).count();
    result.log.push_back(entry);
  }
  return result;
}

MocoTrainResult trainMoco(const Dataset& dataset, const Policy& policy, const MocoConfig& cfg,
                          std::uint64_t seed) {
  PolicyAugmenter augmenter(policy);
  return trainMoco(dataset, augmenter, cfg, seed);
}

std::vector<NamedTensor> encoderStateTensors(EncoderState& state) {
  std::vector<NamedTensor> out;
  for (auto& p : state.query.params()) out.push_back({"query/" + p.name, *p.value});
  for (auto& p : state.key.params()) out.push_back({"key/" + p.name, *p.value});
  out.push_back({"queue", state.queue});
  Tensor cursor({1});
  cursor.data[0] = static_cast<float>(state.cursor);
  out.push_back({"cursor", cursor});
  return out;
}

EncoderState encoderStateFromTensors(const MocoConfig& cfg,
                                     const std::vector<NamedTensor>& tensors) {
  EncoderState state;
  state.query = Encoder<float>(cfg.encoder);
  state.key = Encoder<float>(cfg.encoder);
  auto assign = [&](const std::string& name, Tensor& dst) {
    for (const auto& t : tensors) {
      if (t.name == name) {
        AUGS_REQUIRE(t.tensor.shape == dst.shape, "checkpoint: shape mismatch for " + name);
        dst = t.tensor;
        return;
      }
    }
    throw IoError("checkpoint: missing tensor \"" + name + "\"");
  };
  for (auto& p : state.query.params()) assign("query/" + p.name, *p.value);
  for (auto& p : state.key.params()) assign("key/" + p.name, *p.value);
  state.queue = Tensor({cfg.queueSize, cfg.encoder.projectionDim});
  assign("queue", state.queue);
  Tensor cursor({1});
  assign("cursor", cursor);
  state.cursor = static_cast<int>(cursor.data[0]);
  return state;
}

void writeTrainingLog(const std::string& path, const std::vector<EpochLog>& log) {
  std::ofstream out(path);
  if (!out) throw IoError("training log: cannot write " + path);
  char buf[192];
  for (const auto& e : log) {
    std::snprintf(buf, sizeof(buf),
                  "{\"epoch\":%d,\"loss\":%.6f,\"contrastiveTop1\":%.6f,\"wallSeconds\":%.3f}\n",
                  e.epoch, e.loss, e.contrastiveTop1, e.wallSeconds);
    out << buf;
  }
}

}  // namespace augsearch
