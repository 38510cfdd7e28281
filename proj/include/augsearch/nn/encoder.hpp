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

#ifndef AUGSEARCH_NN_ENCODER_HPP
#define AUGSEARCH_NN_ENCODER_HPP

#include <memory>
#include <string>
#include <vector>

#include "augsearch/nn/layers.hpp"

namespace augsearch {

enum class NormKind { batch, none };

/// Architecture of the convolutional backbone plus projection head.
/// Defaults are the desk-scale encoder.
struct EncoderConfig {
  int inputChannels = 3;
  std::vector<int> channels = {16, 32, 64, 128};
  std::vector<int> strides = {1, 2, 2, 2};
  NormKind norm = NormKind::batch;
  int projectionDim = 64;
  int projectionHidden = 0;  // 0: single linear projection
  bool residualBlocks = false;

  int featureDim() const { return channels.back(); }
  void validate() const {
    AUGS_REQUIRE(!channels.empty() && channels.size() == strides.size(),
                 "EncoderConfig: channels and strides must align");
    AUGS_REQUIRE(projectionDim >= 2, "EncoderConfig: projectionDim must be >= 2");
  }
};

/// Convolutional encoder: stride-configured 3x3 blocks, global average
/// pooling into backbone features, then an L2-normalized projection head for
/// the contrastive objective. Probes read the pre-projection features.
template <typename S>
class Encoder {
public:
  struct Output {
    TensorT<S> features;     // [N, featureDim]
    TensorT<S> projections;  // [N, projectionDim], unit rows
  };

  Encoder() = default;

  explicit Encoder(const EncoderConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    int inC = cfg_.inputChannels;
    for (std::size_t b = 0; b < cfg_.channels.size(); ++b) {
      Block block;
      block.conv = Conv2d<S>(inC, cfg_.channels[b], 3, cfg_.strides[b], 1);
      if (cfg_.norm == NormKind::batch) block.bn = std::make_unique<BatchNorm2d<S>>(cfg_.channels[b]);
      if (cfg_.residualBlocks) {
        block.resConv = std::make_unique<Conv2d<S>>(cfg_.channels[b], cfg_.channels[b], 3, 1, 1);
        if (cfg_.norm == NormKind::batch) {
          block.resBn = std::make_unique<BatchNorm2d<S>>(cfg_.channels[b]);
        }
      }
      blocks_.push_back(std::move(block));
      inC = cfg_.channels[b];
    }
    if (cfg_.projectionHidden > 0) {
      proj1_ = Linear<S>(cfg_.featureDim(), cfg_.projectionHidden);
      proj2_ = Linear<S>(cfg_.projectionHidden, cfg_.projectionDim);
      hasHidden_ = true;
    } else {
      proj1_ = Linear<S>(cfg_.featureDim(), cfg_.projectionDim);
      hasHidden_ = false;
    }
  }

  Encoder(const Encoder& other) : Encoder(other.cfg_) { copyParamsFrom(other); }
  Encoder& operator=(const Encoder& other) {
    if (this != &other) {
      *this = Encoder(other.cfg_);
      copyParamsFrom(other);
    }
    return *this;
  }
  Encoder(Encoder&&) noexcept = default;
  Encoder& operator=(Encoder&&) noexcept = default;

  void init(Rng& rng) {
    for (auto& block : blocks_) {
      block.conv.init(rng);
      if (block.resConv) block.resConv->init(rng);
    }
    proj1_.init(rng);
    if (hasHidden_) proj2_.init(rng);
  }

  Output forward(const TensorT<S>& batch) {
    AUGS_REQUIRE(batch.rank() == 4 && batch.dim(1) == cfg_.inputChannels,
                 "Encoder: batch shape mismatch " + shapeToString(batch.shape));
    TensorT<S> x = batch;
    for (auto& block : blocks_) {
      x = block.conv.forward(x);
      if (block.bn) x = block.bn->forward(x);
      x = block.relu.forward(x);
      if (block.resConv) {
        TensorT<S> z = block.resConv->forward(x);
        if (block.resBn) z = block.resBn->forward(z);
        AUGS_REQUIRE(z.shape == x.shape, "Encoder: residual shape mismatch");
        for (std::size_t i = 0; i < z.data.size(); ++i) z.data[i] += x.data[i];
        x = block.resRelu.forward(z);
      }
    }
    Output out;
    out.features = gap_.forward(x);
#ifndef NDEBUG
    AUGS_REQUIRE(out.features.allFinite(), "Encoder: non-finite features");
#endif
    TensorT<S> p = proj1_.forward(out.features);
    if (hasHidden_) {
      p = projRelu_.forward(p);
      p = proj2_.forward(p);
    }
    out.projections = norm_.forward(p);
    return out;
  }

  /// Backpropagates a gradient on the normalized projections into every
  /// trainable parameter. Requires a cached forward pass.
  void backwardFromProjections(const TensorT<S>& dProj) {
    TensorT<S> g = norm_.backward(dProj);
    if (hasHidden_) {
      g = proj2_.backward(g);
      g = projRelu_.backward(g);
    }
    g = proj1_.backward(g);
    g = gap_.backward(g);
    for (auto it = blocks_.rbegin(); it != blocks_.rend(); ++it) {
      if (it->resConv) {
        TensorT<S> gz = it->resRelu.backward(g);
        TensorT<S> gres = gz;
        if (it->resBn) gres = it->resBn->backward(gres);
        gres = it->resConv->backward(gres);
        for (std::size_t i = 0; i < gz.data.size(); ++i) gz.data[i] += gres.data[i];
        g = std::move(gz);
      }
      g = it->relu.backward(g);
      if (it->bn) g = it->bn->backward(g);
      g = it->conv.backward(g);
    }
  }

  std::vector<ParamView<S>> params() {
    std::vector<ParamView<S>> out;
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      const std::string prefix = "block" + std::to_string(b);
      blocks_[b].conv.collectParams(prefix + "/conv", out);
      if (blocks_[b].bn) blocks_[b].bn->collectParams(prefix + "/bn", out);
      if (blocks_[b].resConv) blocks_[b].resConv->collectParams(prefix + "/resconv", out);
      if (blocks_[b].resBn) blocks_[b].resBn->collectParams(prefix + "/resbn", out);
    }
    proj1_.collectParams("proj1", out);
    if (hasHidden_) proj2_.collectParams("proj2", out);
    return out;
  }

  void zeroGrad() {
    for (auto& p : params()) p.grad->fill(S(0));
  }

  template <typename U>
  void copyParamsFrom(const Encoder<U>& other) {
    auto mine = params();
    auto theirs = const_cast<Encoder<U>&>(other).params();
    AUGS_REQUIRE(mine.size() == theirs.size(), "Encoder: parameter count mismatch");
    for (std::size_t i = 0; i < mine.size(); ++i) {
      AUGS_REQUIRE(mine[i].value->shape == theirs[i].value->shape,
                   "Encoder: parameter shape mismatch at " + mine[i].name);
      for (std::size_t j = 0; j < mine[i].value->data.size(); ++j) {
        mine[i].value->data[j] = static_cast<S>(theirs[i].value->data[j]);
      }
    }
  }

  const EncoderConfig& config() const { return cfg_; }

private:
  template <typename U>
  friend class Encoder;

  struct Block {
    Conv2d<S> conv;
    std::unique_ptr<BatchNorm2d<S>> bn;
    ReLU<S> relu;
    std::unique_ptr<Conv2d<S>> resConv;
    std::unique_ptr<BatchNorm2d<S>> resBn;
    ReLU<S> resRelu;
  };

  EncoderConfig cfg_;
  std::vector<Block> blocks_;
  GlobalAvgPool<S> gap_;
  Linear<S> proj1_, proj2_;
  ReLU<S> projRelu_;
  L2NormalizeRows<S> norm_;
  bool hasHidden_ = false;
};

/// Stacks [C,H,W] images into one [N,C,H,W] batch tensor.
template <typename S>
TensorT<S> stackImages(const std::vector<TensorT<float>>& imgs) {
  AUGS_REQUIRE(!imgs.empty(), "stackImages: empty batch");
  const auto& s0 = imgs.front().shape;
  TensorT<S> batch({static_cast<int>(imgs.size()), s0[0], s0[1], s0[2]});
  std::size_t off = 0;
  for (const auto& img : imgs) {
    AUGS_REQUIRE(img.shape == s0, "stackImages: inconsistent image shapes");
    for (float v : img.data) batch.data[off++] = static_cast<S>(v);
  }
  return batch;
}

}  // namespace augsearch

#endif  // AUGSEARCH_NN_ENCODER_HPP
