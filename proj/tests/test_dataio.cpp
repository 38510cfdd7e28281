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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "augsearch/dataio/dataset.hpp"

using namespace augsearch;
namespace fs = std::filesystem;

namespace {

// Builds a directory of fake batch files with `records` records each.
// Record r of batch b gets label (b + r) % 10 and pixel bytes r % 256 except
// pixel 0 of the red plane, which stores b.
fs::path makeFakeCifar(int records) {
  const fs::path dir = fs::temp_directory_path() / ("augsearch_cifar_" + std::to_string(records));
  fs::create_directories(dir);
  for (int b = 1; b <= 5; ++b) {
    std::ofstream out(dir / ("data_batch_" + std::to_string(b) + ".bin"), std::ios::binary);
    for (int r = 0; r < records; ++r) {
      std::string rec(3073, static_cast<char>(r % 256));
      rec[0] = static_cast<char>((b + r) % 10);
      rec[1] = static_cast<char>(b);
      out.write(rec.data(), static_cast<std::streamsize>(rec.size()));
    }
  }
  return dir;
}

}  // namespace

TEST_CASE("cifar record layout parses") {
  const fs::path dir = makeFakeCifar(4);
  const Dataset ds = detail::loadCifar10Batches(dir.string(), 4);
  CHECK(ds.size() == 20);
  REQUIRE(ds.labels.has_value());
  CHECK((*ds.labels)[0] == 1);       // batch 1, record 0
  CHECK(ds.images[0].at(0, 0, 0) == doctest::Approx(1.0 / 255));  // red plane first
  CHECK(ds.images[0].at(0, 0, 1) == doctest::Approx(0.0));
  CHECK(ds.images[1].at(1, 0, 0) == doctest::Approx(1.0 / 255));  // green plane of record 1
  CHECK(ds.images[0].height() == 32);
  CHECK(ds.numClasses == 10);
  // Loading is pure: two loads are identical.
  const Dataset again = detail::loadCifar10Batches(dir.string(), 4);
  CHECK(again.images[7].pix.data == ds.images[7].pix.data);
  fs::remove_all(dir);
}

TEST_CASE("cifar loader reports missing and truncated files") {
  const fs::path dir = fs::temp_directory_path() / "augsearch_cifar_bad";
  fs::create_directories(dir);
  CHECK_THROWS_WITH_AS(detail::loadCifar10Batches(dir.string(), 4),
                       doctest::Contains("data_batch_1.bin"), IoError);
  // One complete record then a truncated one.
  {
    std::ofstream out(dir / "data_batch_1.bin", std::ios::binary);
    std::string rec(3073, '\0');
    out.write(rec.data(), 3073);
    out.write(rec.data(), 100);
  }
  CHECK_THROWS_WITH_AS(detail::loadCifar10Batches(dir.string(), 4), doctest::Contains("3073"),
                       IoError);
  // Bad label byte.
  {
    std::ofstream out(dir / "data_batch_1.bin", std::ios::binary);
    std::string rec(3073, '\0');
    rec[0] = 11;
    out.write(rec.data(), 3073);
  }
  CHECK_THROWS_WITH_AS(detail::loadCifar10Batches(dir.string(), 1),
                       doctest::Contains("label byte 11"), IoError);
  fs::remove_all(dir);
}

TEST_CASE("synthetic dataset is reproducible and balanced") {
  const Dataset a = genSynthetic(2, 100, {16, 16}, 7);
  const Dataset b = genSynthetic(2, 100, {16, 16}, 7);
  CHECK(a.size() == 200);
  REQUIRE(a.labels.has_value());
  bool identical = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    identical = identical && a.images[i].pix.data == b.images[i].pix.data;
  }
  CHECK(identical);

  int counts[2] = {0, 0};
  for (int label : *a.labels) counts[label]++;
  CHECK(counts[0] == 100);
  CHECK(counts[1] == 100);

  const Dataset c = genSynthetic(2, 100, {16, 16}, 8);
  CHECK_FALSE(a.images[0].pix.data == c.images[0].pix.data);

  for (float v : a.images[0].pix.data) {
    CHECK(v >= 0.0f);
    CHECK(v <= 1.0f);
  }
  CHECK_THROWS_AS(genSynthetic(1, 10, {16, 16}, 0), ContractError);
}

TEST_CASE("kfold split partitions the index range") {
  SUBCASE("n=10 K=5 gives singleton halves") {
    const auto folds = kfoldSplit(10, 5, 3);
    REQUIRE(folds.size() == 5);
    std::set<int> seen;
    for (const auto& f : folds) {
      CHECK(f.dM.size() == 1);
      CHECK(f.dA.size() == 1);
      for (int i : f.dM) seen.insert(i);
      for (int i : f.dA) seen.insert(i);
    }
    CHECK(seen.size() == 10);
    CHECK(*seen.begin() == 0);
    CHECK(*seen.rbegin() == 9);
  }
  SUBCASE("disjoint halves and full coverage at K=5, n=103") {
    const auto folds = kfoldSplit(103, 5, 11);
    std::set<int> seen;
    std::size_t total = 0;
    for (const auto& f : folds) {
      std::set<int> m(f.dM.begin(), f.dM.end());
      for (int i : f.dA) CHECK(m.count(i) == 0);
      for (int i : f.dM) seen.insert(i);
      for (int i : f.dA) seen.insert(i);
      total += f.dM.size() + f.dA.size();
    }
    CHECK(total == 103);
    CHECK(seen.size() == 103);
  }
  SUBCASE("same seed, same split") {
    const auto a = kfoldSplit(40, 4, 9);
    const auto b = kfoldSplit(40, 4, 9);
    for (std::size_t k = 0; k < a.size(); ++k) {
      CHECK(a[k].dM == b[k].dM);
      CHECK(a[k].dA == b[k].dA);
    }
  }
  SUBCASE("n < 2K is rejected") { CHECK_THROWS_AS(kfoldSplit(9, 5, 0), ContractError); }
}

TEST_CASE("subsample and gather preserve labels") {
  const Dataset ds = genSynthetic(4, 25, {8, 8}, 5);
  const Dataset sub = subsample(ds, 20, 1);
  CHECK(sub.size() == 20);
  REQUIRE(sub.labels.has_value());
  CHECK(sub.labels->size() == 20);
  const Dataset picked = gather(ds, {0, 1, 2});
  CHECK(picked.size() == 3);
  CHECK((*picked.labels)[1] == (*ds.labels)[1]);
  CHECK_THROWS_AS(gather(ds, {-1}), ContractError);
  CHECK_THROWS_AS(subsample(ds, 0, 1), ContractError);
}
