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

#ifndef AUGSEARCH_IMAGEOPS_IMAGE_HPP
#define AUGSEARCH_IMAGEOPS_IMAGE_HPP

#include <array>
#include <string>

#include "augsearch/core/tensor.hpp"

namespace augsearch {

/// RGB raster stored as a [3, H, W] float tensor with values in [0, 1].
struct Image {
  Tensor pix;

  Image() = default;
  explicit Image(int h, int w) : pix({3, h, w}) {}
  explicit Image(Tensor t) : pix(std::move(t)) {
    AUGS_REQUIRE(pix.rank() == 3 && pix.dim(0) == 3, "Image: expected [3,H,W] tensor");
  }

  int height() const { return pix.dim(1); }
  int width() const { return pix.dim(2); }

  float& at(int c, int y, int x) { return pix.at({c, y, x}); }
  float at(int c, int y, int x) const { return pix.at({c, y, x}); }
};

/// The 15 searchable transformations plus the two base-pipeline ops.
enum class OpId {
  shearX,
  shearY,
  translateX,
  translateY,
  rotate,
  autoContrast,
  invert,
  solarize,
  posterize,
  contrast,
  color,
  brightness,
  sharpness,
  cutout,
  equalize,
  horizontalFlip,
  randomResizeCrop,
};

inline constexpr int kNumSearchableOps = 15;

inline constexpr std::array<OpId, kNumSearchableOps> kSearchableOps = {
    OpId::shearX,   OpId::shearY,     OpId::translateX, OpId::translateY, OpId::rotate,
    OpId::autoContrast, OpId::invert, OpId::solarize,   OpId::posterize,  OpId::contrast,
    OpId::color,    OpId::brightness, OpId::sharpness,  OpId::cutout,     OpId::equalize,
};

inline bool isSearchable(OpId op) {
  return op != OpId::horizontalFlip && op != OpId::randomResizeCrop;
}

const std::string& opName(OpId op);

/// Inverse of opName; throws ParseError on unknown names.
OpId opFromName(const std::string& name);

/// Endpoints of the linear magnitude scale for one op.
struct MagnitudeRange {
  OpId opId;
  double min;
  double max;
};

/// Magnitude endpoints for a searchable op. Flip and crop have none.
const MagnitudeRange& magnitudeRange(OpId op);

/// True for ops whose mapped parameter is an integer (posterize bits,
/// solarize threshold).
inline bool isIntegerParam(OpId op) { return op == OpId::posterize || op == OpId::solarize; }

}  // namespace augsearch

#endif  // AUGSEARCH_IMAGEOPS_IMAGE_HPP
