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

#include "augsearch/policy/augmenter.hpp"

namespace augsearch {

Image BasePipeline::apply(const Image& img, Rng& rng) const {
  Image out = rng.bernoulli(cfg_.flipProb) ? horizontalFlip(img) : img;
  if (cfg_.crop) {
    out = randomResizeCrop(out, rng, cfg_.cropScale, {img.height(), img.width()});
  }
  return out;
}

Image PolicyAugmenter::apply(const Image& img, Rng& rng) const {
  return applyPolicy(policy_, base_.apply(img, rng), rng);
}

Image SingleOpAugmenter::apply(const Image& img, Rng& rng) const {
  Image out = rng.bernoulli(flipProb_) ? horizontalFlip(img) : img;
  if (op_ == OpId::randomResizeCrop) {
    return randomResizeCrop(out, rng, {0.2, 1.0}, {img.height(), img.width()});
  }
  const double param = magnitudeToParam(op_, rng.uniform());
  return applyTransform(out, op_, param, rng);
}

}  // namespace augsearch
