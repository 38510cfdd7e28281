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

#ifndef AUGSEARCH_DATAIO_DATASET_HPP
#define AUGSEARCH_DATAIO_DATASET_HPP

#include <optional>
#include <string>
#include <vector>

#include "augsearch/core/rng.hpp"
#include "augsearch/imageops/image.hpp"

namespace augsearch {

/// Immutable after load. Labels exist only for the supervised-probe
/// correlation harness; the policy search never reads them.
struct Dataset {
  std::vector<Image> images;
  std::optional<std::vector<int>> labels;
  std::string name;
  int numClasses = 0;

  std::size_t size() const { return images.size(); }
};

/// One fold's split into a model-training half and a policy-evaluation half.
struct FoldSplit {
  int k = 0;
  std::vector<int> dM;
  std::vector<int> dA;
};

/// Reads the five standard binary training batches (data_batch_1.bin ..
/// data_batch_5.bin, 10,000 records of 3,073 bytes each: one label byte then
/// 3,072 pixel bytes as R, G, B planes). Pixels map to byte/255.
Dataset loadCifar10(const std::string& dir);

namespace detail {
/// Same record layout with a configurable record count per batch file.
Dataset loadCifar10Batches(const std::string& dir, int recordsPerFile);
}  // namespace detail

/// Class-dependent oriented gratings with a directional brightness ramp, so
/// rotations are decodable and classes are linearly separable from features
/// that capture orientation. Deterministic per seed; labels attached;
/// classes exactly balanced. Image i has label i % numClasses.
Dataset genSynthetic(int numClasses, int perClass, std::pair<int, int> size, std::uint64_t seed);

/// Shuffles 0..n-1 once by seed, partitions into K folds, and splits each
/// fold 50/50 into (dM, dA). Requires n >= 2K.
std::vector<FoldSplit> kfoldSplit(int n, int K, std::uint64_t seed);

/// Random subset of n images (with labels when present), seeded.
Dataset subsample(const Dataset& dataset, int n, std::uint64_t seed);

/// View of a dataset through an index list.
Dataset gather(const Dataset& dataset, const std::vector<int>& indices);

}  // namespace augsearch

#endif  // AUGSEARCH_DATAIO_DATASET_HPP
