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

#include "augsearch/sseval/probe.hpp"

#include <numeric>

#include "augsearch/nn/loss.hpp"

namespace augsearch {

namespace {

struct TaskData {
  Tensor features;  // [M, featDim]
  std::vector<int> labels;
};

TaskData deriveTaskData(const Encoder<float>& frozen, ProbeTask task,
                        const std::vector<Image>& imgs, const std::vector<int>* classLabels,
                        int featureBatch, Rng rng) {
  LabelledBatch batch;
  switch (task.kind) {
    case ProbeKind::rotation:
      batch = rotateBatch(imgs);
      break;
    case ProbeKind::jigsaw:
      batch = jigsawBatch(imgs, rng);
      break;
    case ProbeKind::supervised: {
      AUGS_REQUIRE(classLabels != nullptr, "trainProbe: supervised task needs labels");
      batch.images = imgs;
      batch.labels = *classLabels;
      break;
    }
  }
  TaskData out;
  out.features = extractFeatures(frozen, batch.images, featureBatch);
  out.labels = std::move(batch.labels);
  return out;
}

Tensor gatherRows(const Tensor& m, const std::vector<int>& rows) {
  const int d = m.dim(1);
  Tensor out({static_cast<int>(rows.size()), d});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < d; ++j) {
      out.at({static_cast<int>(i), j}) = m.at({rows[i], j});
    }
  }
  return out;
}

}  // namespace

Tensor extractFeatures(const Encoder<float>& encoder, const std::vector<Image>& imgs,
                       int batchSize) {
  AUGS_REQUIRE(!imgs.empty(), "extractFeatures: empty image list");
  AUGS_REQUIRE(batchSize >= 1, "extractFeatures: batch size must be positive");
  Encoder<float> worker = encoder;  // the caller's encoder is untouched
  const int n = static_cast<int>(imgs.size());
  const int featDim = encoder.config().featureDim();
  Tensor out({n, featDim});
  for (int start = 0; start < n; start += batchSize) {
    const int count = std::min(batchSize, n - start);
    std::vector<Tensor> chunk;
    chunk.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
      chunk.push_back(imgs[static_cast<std::size_t>(start + i)].pix);
    }
    const auto fwd = worker.forward(stackImages<float>(chunk));
    for (int i = 0; i < count; ++i) {
      for (int j = 0; j < featDim; ++j) {
        out.at({start + i, j}) = fwd.features.at({i, j});
      }
    }
  }
  return out;
}

ProbeResult trainProbe(const Encoder<float>& frozen, ProbeTask task, const Dataset& trainData,
                       const ProbeConfig& cfg, std::uint64_t seed) {
  AUGS_REQUIRE(!trainData.images.empty(), "trainProbe: empty dataset");
  cfg.sgd.validate();
  if (task.kind == ProbeKind::supervised) {
    AUGS_REQUIRE(trainData.labels.has_value(), "trainProbe: supervised task needs labels");
    task.numClasses = trainData.numClasses;
    AUGS_REQUIRE(task.numClasses >= 2, "trainProbe: dataset lacks class count");
  }

  const Rng root(seed);

  // Hold out whole images, then expand each side separately.
  const int n = static_cast<int>(trainData.images.size());
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  Rng shuffleRng = root.fork(1);
  for (int i = n - 1; i > 0; --i) {
    std::swap(order[static_cast<std::size_t>(i)],
              order[static_cast<std::size_t>(shuffleRng.uniformInt(i + 1))]);
  }
  int holdCount = static_cast<int>(n * cfg.holdoutFraction);
  holdCount = std::clamp(holdCount, 1, n - 1);
  std::vector<Image> trainImgs, holdImgs;
  std::vector<int> trainCls, holdCls;
  for (int i = 0; i < n; ++i) {
    const int idx = order[static_cast<std::size_t>(i)];
    const bool hold = i < holdCount;
    (hold ? holdImgs : trainImgs).push_back(trainData.images[static_cast<std::size_t>(idx)]);
    if (trainData.labels) {
      (hold ? holdCls : trainCls).push_back((*trainData.labels)[static_cast<std::size_t>(idx)]);
    }
  }

  const TaskData train = deriveTaskData(frozen, task, trainImgs,
                                        trainData.labels ? &trainCls : nullptr, cfg.featureBatch,
                                        root.fork(2));
  const TaskData hold = deriveTaskData(frozen, task, holdImgs,
                                       trainData.labels ? &holdCls : nullptr, cfg.featureBatch,
                                       root.fork(3));

  const int featDim = frozen.config().featureDim();
  ProbeResult result;
  result.task = task;

  // Optional MLP ablation shares the training loop with the linear probe.
  Linear<float> hidden;
  ReLU<float> relu;
  Linear<float> head;
  std::vector<ParamView<float>> params;
  Rng initRng = root.fork(4);
  if (cfg.mlpHead) {
    hidden = Linear<float>(featDim, cfg.mlpHidden);
    hidden.init(initRng);
    head = Linear<float>(cfg.mlpHidden, task.numClasses);
    head.init(initRng);
    hidden.collectParams("probe/hidden", params);
    head.collectParams("probe/head", params);
  } else {
    head = Linear<float>(featDim, task.numClasses);
    head.init(initRng);
    head.collectParams("probe/head", params);
  }

  auto forwardHead = [&](const Tensor& feats) {
    if (cfg.mlpHead) return head.forward(relu.forward(hidden.forward(feats)));
    return head.forward(feats);
  };
  auto backwardHead = [&](const Tensor& dLogits) {
    Tensor g = head.backward(dLogits);
    if (cfg.mlpHead) hidden.backward(relu.backward(g));
  };

  SgdOptimizer<float> optimizer(cfg.sgd);
  const int m = train.features.dim(0);
  std::vector<int> batchOrder(static_cast<std::size_t>(m));
  std::iota(batchOrder.begin(), batchOrder.end(), 0);
  double trainTop1 = 0.0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    Rng epochRng = root.fork(100 + static_cast<std::uint64_t>(epoch));
    for (int i = m - 1; i > 0; --i) {
      std::swap(batchOrder[static_cast<std::size_t>(i)],
                batchOrder[static_cast<std::size_t>(epochRng.uniformInt(i + 1))]);
    }
    double top1Acc = 0.0;
    int batches = 0;
    for (int start = 0; start < m; start += cfg.batchSize) {
      const int count = std::min(cfg.batchSize, m - start);
      std::vector<int> rows(batchOrder.begin() + start, batchOrder.begin() + start + count);
      const Tensor feats = gatherRows(train.features, rows);
      std::vector<int> labels(static_cast<std::size_t>(count));
      for (int i = 0; i < count; ++i) {
        labels[static_cast<std::size_t>(i)] = train.labels[static_cast<std::size_t>(rows[static_cast<std::size_t>(i)])];
      }
      for (auto& p : params) p.grad->fill(0.0f);
      const auto ce = softmaxCrossEntropy<float>(forwardHead(feats), labels);
      backwardHead(ce.grad);
      optimizer.step(params, epoch);
      top1Acc += ce.top1;
      ++batches;
    }
    trainTop1 = top1Acc / batches;
  }
  result.trainTop1 = trainTop1;

  const auto evalCe = softmaxCrossEntropy<float>(forwardHead(hold.features), hold.labels);
  result.top1 = evalCe.top1;
  result.evalLoss = evalCe.loss;
  result.head = head;
  return result;
}

}  // namespace augsearch
