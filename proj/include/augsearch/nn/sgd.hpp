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

#ifndef AUGSEARCH_NN_SGD_HPP
#define AUGSEARCH_NN_SGD_HPP

#include <utility>
#include <vector>

#include "augsearch/nn/layers.hpp"

namespace augsearch {

struct SgdConfig {
  double lr = 0.06;
  double momentum = 0.9;
  double weightDecay = 1e-4;
  /// (epoch, multiplier): the learning rate is multiplied from that epoch on.
  std::vector<std::pair<int, double>> schedule;

  void validate() const {
    // lr = 0 is allowed: it makes one training step a parameter fixed point.
    AUGS_REQUIRE(lr >= 0.0, "SgdConfig: lr must be non-negative");
    AUGS_REQUIRE(momentum >= 0.0 && momentum < 1.0, "SgdConfig: momentum must be in [0,1)");
  }

  double lrAt(int epoch) const {
    double value = lr;
    for (const auto& [e, mult] : schedule) {
      if (epoch >= e) value *= mult;
    }
    return value;
  }
};

/// SGD with momentum and decoupled step schedule:
///   v <- momentum * v + g + weightDecay * theta
///   theta <- theta - lr(epoch) * v
template <typename S>
class SgdOptimizer {
public:
  explicit SgdOptimizer(SgdConfig cfg) : cfg_(cfg) { cfg_.validate(); }

  void step(std::vector<ParamView<S>>& params, int epoch) {
    if (velocity_.size() != params.size()) {
      velocity_.clear();
      velocity_.reserve(params.size());
      for (const auto& p : params) velocity_.emplace_back(p.value->shape);
    }
    const double lr = cfg_.lrAt(epoch);
    for (std::size_t i = 0; i < params.size(); ++i) {
      auto& theta = params[i].value->data;
      auto& grad = params[i].grad->data;
      auto& vel = velocity_[i].data;
      AUGS_REQUIRE(theta.size() == grad.size(), "SgdOptimizer: grad size mismatch");
      for (std::size_t j = 0; j < theta.size(); ++j) {
        vel[j] = static_cast<S>(cfg_.momentum * vel[j] + grad[j] + cfg_.weightDecay * theta[j]);
        theta[j] = static_cast<S>(theta[j] - lr * vel[j]);
      }
    }
  }

  const SgdConfig& config() const { return cfg_; }

private:
  SgdConfig cfg_;
  std::vector<TensorT<S>> velocity_;
};

}  // namespace augsearch

#endif  // AUGSEARCH_NN_SGD_HPP
