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

#ifndef AUGSEARCH_SSEVAL_TASKS_HPP
#define AUGSEARCH_SSEVAL_TASKS_HPP

#include <vector>

#include "augsearch/core/rng.hpp"
#include "augsearch/imageops/image.hpp"

namespace augsearch {

enum class ProbeKind { rotation, jigsaw, supervised };

struct ProbeTask {
  ProbeKind kind = ProbeKind::rotation;
  int numClasses = 4;

  static ProbeTask rotation() { return {ProbeKind::rotation, 4}; }
  static ProbeTask jigsaw() { return {ProbeKind::jigsaw, 24}; }
  static ProbeTask supervised(int classes) { return {ProbeKind::supervised, classes}; }
};

struct LabelledBatch {
  std::vector<Image> images;
  std::vector<int> labels;
};

/// Rotates the image counterclockwise by label * 90 degrees (exact pixel
/// permutation; square images only).
Image rotate90(const Image& img, int label);

/// Deterministic expansion: every image in all four rotations
/// {0, 90, 180, 270} with labels 0..3. Output size is 4x the input.
LabelledBatch rotateBatch(const std::vector<Image>& imgs);

/// Reassembles the four quadrants under a permutation. Slot i of the output
/// (TL, TR, BL, BR order) receives input quadrant perm[i].
Image permuteQuadrants(const Image& img, const std::array<int, 4>& perm);

/// Shuffles each image's quadrants by a uniformly drawn permutation; the
/// label is the permutation's lexicographic index in [0, 24). Requires even
/// height and width.
LabelledBatch jigsawBatch(const std::vector<Image>& imgs, Rng& rng);

/// Lexicographic rank of a permutation of {0,1,2,3} and its inverse.
int permutationIndex(const std::array<int, 4>& perm);
std::array<int, 4> indexToPermutation(int index);

}  // namespace augsearch

#endif  // AUGSEARCH_SSEVAL_TASKS_HPP
