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

#ifndef AUGSEARCH_IMAGEOPS_TRANSFORMS_HPP
#define AUGSEARCH_IMAGEOPS_TRANSFORMS_HPP

#include <utility>

#include "augsearch/core/rng.hpp"
#include "augsearch/imageops/image.hpp"

namespace augsearch {

struct TransformOptions {
  /// Fill for pixels an affine warp pulls from outside the source raster.
  float geometricFill = 0.5f;
  /// Fill for the cutout square.
  float cutoutFill = 0.0f;
};

/// Maps a unit-scale magnitude onto the op's native parameter range:
/// min + lambda * (max - min), rounded to the nearest integer for
/// integer-valued ops. lambda outside [0, 1] is a contract violation.
double magnitudeToParam(OpId op, double lambda);

/// Applies a single transformation with its native parameter. The rng is
/// consumed only by ops with internal randomness (cutout's square position);
/// results are deterministic given (img, op, param, rng state).
Image applyTransform(const Image& img, OpId op, double param, Rng& rng,
                     const TransformOptions& opts = {});

/// Samples an area fraction in scaleRange, crops a random window of that
/// area (aspect ratio preserved, clamped to at least 1x1), and resizes to
/// outSize with bilinear interpolation.
Image randomResizeCrop(const Image& img, Rng& rng, std::pair<double, double> scaleRange,
                       std::pair<int, int> outSize);

/// Reverses the pixel columns.
Image horizontalFlip(const Image& img);

}  // namespace augsearch

#endif  // AUGSEARCH_IMAGEOPS_TRANSFORMS_HPP
