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

#ifndef AUGSEARCH_NN_CHECKPOINT_HPP
#define AUGSEARCH_NN_CHECKPOINT_HPP

#include <string>
#include <vector>

#include "augsearch/core/tensor.hpp"

namespace augsearch {

struct NamedTensor {
  std::string name;
  Tensor tensor;
};

/// Binary checkpoint: magic "SAUG", u32 version, u32 tensor count, then per
/// tensor { u32 name length, name bytes, u32 rank, u32 dims..., raw
/// little-endian f32 data }.
void saveCheckpoint(const std::string& path, const std::vector<NamedTensor>& tensors);

std::vector<NamedTensor> loadCheckpoint(const std::string& path);

}  // namespace augsearch

#endif  // AUGSEARCH_NN_CHECKPOINT_HPP
