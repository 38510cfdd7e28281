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

#include "augsearch/sseval/tasks.hpp"

#include <algorithm>
#include <array>
#include <numeric>

namespace augsearch {

Image rotate90(const Image& img, int label) {
  AUGS_REQUIRE(label >= 0 && label < 4, "rotate90: label must be in [0,4)");
  const int h = img.height();
  const int w = img.width();
  AUGS_REQUIRE(h == w, "rotate90: image must be square");
  if (label == 0) return img;
  Image out(h, w);
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        // One counterclockwise quarter turn: dst(y, x) = src(x, W-1-y).
        float v = 0.0f;
        switch (label) {
          case 1: v = img.at(c, x, w - 1 - y); break;
          case 2: v = img.at(c, h - 1 - y, w - 1 - x); break;
          case 3: v = img.at(c, h - 1 - x, y); break;
        }
        out.at(c, y, x) = v;
      }
    }
  }
  return out;
}

LabelledBatch rotateBatch(const std::vector<Image>& imgs) {
  AUGS_REQUIRE(!imgs.empty(), "rotateBatch: empty input");
  LabelledBatch out;
  out.images.reserve(imgs.size() * 4);
  out.labels.reserve(imgs.size() * 4);
  for (const Image& img : imgs) {
    for (int r = 0; r < 4; ++r) {
      out.images.push_back(rotate90(img, r));
      out.labels.push_back(r);
    }
  }
  return out;
}

int permutationIndex(const std::array<int, 4>& perm) {
  std::array<int, 4> sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  const std::array<int, 4> identity = {0, 1, 2, 3};
  AUGS_REQUIRE(sorted == identity, "permutationIndex: not a permutation of {0,1,2,3}");
  std::array<int, 4> current = {0, 1, 2, 3};
  int index = 0;
  int factorial[4] = {6, 2, 1, 1};
  for (int pos = 0; pos < 3; ++pos) {
    const auto it = std::find(current.begin() + pos, current.end(), perm[static_cast<std::size_t>(pos)]);
    const int offset = static_cast<int>(it - (current.begin() + pos));
    index += offset * factorial[pos];
    std::rotate(current.begin() + pos, it, it + 1);
  }
  return index;
}

std::array<int, 4> indexToPermutation(int index) {
  AUGS_REQUIRE(index >= 0 && index < 24, "indexToPermutation: index outside [0,24)");
  std::array<int, 4> current = {0, 1, 2, 3};
  std::array<int, 4> out{};
  int factorial[4] = {6, 2, 1, 1};
  for (int pos = 0; pos < 4; ++pos) {
    const int offset = pos < 3 ? index / factorial[pos] : 0;
    if (pos < 3) index %= factorial[pos];
    const auto it = current.begin() + pos + offset;
    out[static_cast<std::size_t>(pos)] = *it;
    std::rotate(current.begin() + pos, it, it + 1);
  }
  return out;
}

Image permuteQuadrants(const Image& img, const std::array<int, 4>& perm) {
  const int h = img.height();
  const int w = img.width();
  AUGS_REQUIRE(h % 2 == 0 && w % 2 == 0, "permuteQuadrants: height and width must be even");
  const int hh = h / 2;
  const int hw = w / 2;
  // Quadrant origin (y, x) in TL, TR, BL, BR order.
  const int origin[4][2] = {{0, 0}, {0, hw}, {hh, 0}, {hh, hw}};
  Image out(h, w);
  for (int slot = 0; slot < 4; ++slot) {
    const int src = perm[static_cast<std::size_t>(slot)];
    for (int c = 0; c < 3; ++c) {
      for (int y = 0; y < hh; ++y) {
        for (int x = 0; x < hw; ++x) {
          out.at(c, origin[slot][0] + y, origin[slot][1] + x) =
              img.at(c, origin[src][0] + y, origin[src][1] + x);
        }
      }
    }
  }
  return out;
}

LabelledBatch jigsawBatch(const std::vector<Image>& imgs, Rng& rng) {
  AUGS_REQUIRE(!imgs.empty(), "jigsawBatch: empty input");
  LabelledBatch out;
  out.images.reserve(imgs.size());
  out.labels.reserve(imgs.size());
  for (const Image& img : imgs) {
    const int label = rng.uniformInt(24);
    out.images.push_back(permuteQuadrants(img, indexToPermutation(label)));
    out.labels.push_back(label);
  }
  return out;
}

}  // namespace augsearch
