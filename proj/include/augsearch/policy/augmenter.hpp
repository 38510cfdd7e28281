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

#ifndef AUGSEARCH_POLICY_AUGMENTER_HPP
#define AUGSEARCH_POLICY_AUGMENTER_HPP

#include <memory>
#include <utility>

#include "augsearch/policy/policy.hpp"

namespace augsearch {

/// Produces one augmented view of an image. Implementations are immutable
/// after construction and safe to share across workers; all randomness comes
/// from the caller-supplied stream.
class ViewAugmenter {
public:
  virtual ~ViewAugmenter() = default;
  virtual Image apply(const Image& img, Rng& rng) const = 0;
};

/// The base pipeline: random left-right flip with p = 0.5 followed by a
/// random resize crop with scale range (0.2, 1.0) back to the input size.
struct BasePipelineConfig {
  double flipProb = 0.5;
  std::pair<double, double> cropScale{0.2, 1.0};
  bool crop = true;
};

class BasePipeline : public ViewAugmenter {
public:
  explicit BasePipeline(BasePipelineConfig cfg = {}) : cfg_(cfg) {}
  Image apply(const Image& img, Rng& rng) const override;

private:
  BasePipelineConfig cfg_;
};

/// Base pipeline followed by a policy draw.
class PolicyAugmenter : public ViewAugmenter {
public:
  PolicyAugmenter(Policy policy, BasePipelineConfig base = {})
      : policy_(std::move(policy)), base_(base) {
    validatePolicy(policy_);
  }
  Image apply(const Image& img, Rng& rng) const override;
  const Policy& policy() const { return policy_; }

private:
  Policy policy_;
  BasePipeline base_;
};

/// One transformation applied every time (p = 1) with its magnitude redrawn
/// uniformly from the unit scale at each application, on top of a random
/// flip. The randomResizeCrop candidate is flip plus the crop itself.
class SingleOpAugmenter : public ViewAugmenter {
public:
  explicit SingleOpAugmenter(OpId op, double flipProb = 0.5) : op_(op), flipProb_(flipProb) {}
  Image apply(const Image& img, Rng& rng) const override;
  OpId op() const { return op_; }

private:
  OpId op_;
  double flipProb_;
};

}  // namespace augsearch

#endif  // AUGSEARCH_POLICY_AUGMENTER_HPP
