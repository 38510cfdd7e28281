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

#include <cmath>

#include "augsearch/policy/augmenter.hpp"
#include "augsearch/policy/policy.hpp"

using namespace augsearch;

namespace {

Image gridImage(int h, int w, std::uint64_t seed) {
  Image img(h, w);
  Rng rng(seed);
  for (auto& v : img.pix.data) v = static_cast<float>(rng.uniformInt(257)) / 256.0f;
  return img;
}

bool bitIdentical(const Image& a, const Image& b) {
  return a.pix.shape == b.pix.shape && a.pix.data == b.pix.data;
}

Policy singleTransformPolicy(OpId op, double p, double lambda) {
  Policy policy;
  policy.name = "single";
  policy.subPolicies.push_back({{TransformSpec{op, p, lambda}}});
  return policy;
}

Policy randomPolicy(Rng& rng) {
  Policy policy;
  policy.name = "rand-" + std::to_string(rng.uniformInt(1000));
  const int nSub = 1 + rng.uniformInt(4);
  for (int s = 0; s < nSub; ++s) {
    SubPolicy sp;
    const int nT = 1 + rng.uniformInt(3);
    for (int t = 0; t < nT; ++t) {
      TransformSpec spec;
      spec.op = kSearchableOps[static_cast<std::size_t>(rng.uniformInt(kNumSearchableOps))];
      spec.p = rng.uniform();
      spec.lambda = rng.uniform();
      sp.transforms.push_back(spec);
    }
    policy.subPolicies.push_back(sp);
  }
  policy.provenance.lossKind = "minimax";
  policy.provenance.seeds = {rng.nextU64() >> 12};
  policy.provenance.foldIds = {0, 1};
  return policy;
}

}  // namespace

TEST_CASE("p = 0 gate never fires") {
  const Image img = gridImage(8, 8, 1);
  const Policy policy = singleTransformPolicy(OpId::invert, 0.0, 0.5);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    CHECK(bitIdentical(applyPolicy(policy, img, rng), img));
  }
}

TEST_CASE("double invert at p = 1 composes to the identity") {
  const Image img = gridImage(8, 8, 2);
  Policy policy;
  policy.name = "inv2";
  policy.subPolicies.push_back(
      {{TransformSpec{OpId::invert, 1.0, 0.5}, TransformSpec{OpId::invert, 1.0, 0.5}}});
  Rng rng(3);
  CHECK(bitIdentical(applyPolicy(policy, img, rng), img));
}

TEST_CASE("fixed seed reproduces the application") {
  const Image img = gridImage(10, 10, 3);
  Policy policy;
  Rng gen(77);
  policy = randomPolicy(gen);
  Rng a(5);
  Rng b(5);
  CHECK(bitIdentical(applyPolicy(policy, img, a), applyPolicy(policy, img, b)));
}

TEST_CASE("Bernoulli gate fires a binomially plausible number of times") {
  // Single transform with p = 0.5 over 10,000 applications: 5,000 +/- 3 sigma.
  Image zeros(4, 4);
  const Policy policy = singleTransformPolicy(OpId::invert, 0.5, 0.5);
  Rng rng(11);
  int fired = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const Image out = applyPolicy(policy, zeros, rng);
    fired += out.pix.data[0] == 1.0f;
  }
  const double sigma = std::sqrt(n * 0.25);
  CHECK(fired > 5000 - 3 * sigma);
  CHECK(fired < 5000 + 3 * sigma);
}

TEST_CASE("sub-policy order matters for non-commuting ops") {
  const Image img = gridImage(16, 16, 9);
  Policy rotateThenCutout;
  rotateThenCutout.name = "a";
  rotateThenCutout.subPolicies.push_back(
      {{TransformSpec{OpId::rotate, 1.0, 1.0}, TransformSpec{OpId::cutout, 1.0, 1.0}}});
  Policy cutoutThenRotate;
  cutoutThenRotate.name = "b";
  cutoutThenRotate.subPolicies.push_back(
      {{TransformSpec{OpId::cutout, 1.0, 1.0}, TransformSpec{OpId::rotate, 1.0, 1.0}}});
  Rng a(21);
  Rng b(21);
  CHECK_FALSE(bitIdentical(applyPolicy(rotateThenCutout, img, a),
                           applyPolicy(cutoutThenRotate, img, b)));
}

TEST_CASE("serialization round-trips randomly generated policies") {
  Rng gen(123);
  for (int i = 0; i < 50; ++i) {
    const Policy policy = randomPolicy(gen);
    const std::string doc = serializePolicy(policy);
    const Policy back = deserializePolicy(doc);
    CHECK(serializePolicy(back) == doc);
    REQUIRE(back.subPolicies.size() == policy.subPolicies.size());
    CHECK(back.name == policy.name);
    CHECK(back.provenance.lossKind == policy.provenance.lossKind);
  }
}

TEST_CASE("canonical document is a serialization fixed point") {
  const std::string doc =
      R"({"name":"p","provenance":{"foldIds":[0],"lossKind":"minRot","seeds":[7]},)"
      R"("subPolicies":[[{"lambda":0.250000,"op":"rotate","p":1.000000}]]})";
  CHECK(serializePolicy(deserializePolicy(doc)) == doc);
}

TEST_CASE("randaugment policies serialize and round-trip") {
  RandAugmentConfig cfg;
  cfg.nTau = 2;
  cfg.lambdaDiscrete = 9;
  cfg.opSubset = {OpId::rotate, OpId::invert, OpId::solarize};
  const Policy policy = makeRandaugmentPolicy(cfg);
  const std::string doc = serializePolicy(policy);
  const Policy back = deserializePolicy(doc);
  REQUIRE(back.randaugment.has_value());
  CHECK(back.randaugment->nTau == 2);
  CHECK(back.randaugment->lambdaDiscrete == 9);
  CHECK(serializePolicy(back) == doc);
}

TEST_CASE("parse errors are descriptive") {
  CHECK_THROWS_WITH_AS(
      deserializePolicy(
          R"({"name":"x","subPolicies":[[{"lambda":0.5,"op":"blurX","p":1.0}]]})"),
      doctest::Contains("blurX"), ParseError);
  CHECK_THROWS_WITH_AS(
      deserializePolicy(
          R"({"name":"x","subPolicies":[[{"lambda":0.5,"op":"rotate","p":1.5}]]})"),
      doctest::Contains("\"p\""), ParseError);
  CHECK_THROWS_AS(deserializePolicy("not json"), ParseError);
  CHECK_THROWS_AS(deserializePolicy(R"({"subPolicies":[]})"), ParseError);
}

TEST_CASE("randaugment sampling semantics") {
  SUBCASE("empty op subset is rejected") {
    RandAugmentConfig cfg;
    cfg.opSubset = {};
    CHECK_THROWS_AS(makeRandaugmentPolicy(cfg), ContractError);
  }
  SUBCASE("single-op subset fires with p = 1") {
    RandAugmentConfig cfg;
    cfg.nTau = 1;
    cfg.lambdaDiscrete = 30;
    cfg.opSubset = {OpId::invert};
    const Policy policy = makeRandaugmentPolicy(cfg);
    Image zeros(4, 4);
    Rng rng(1);
    const Image out = applyPolicy(policy, zeros, rng);
    CHECK(out.pix.data[0] == 1.0f);
  }
  SUBCASE("lambda = 1 maps to the range minimum") {
    RandAugmentConfig cfg;
    cfg.nTau = 1;
    cfg.lambdaDiscrete = 1;  // unit-scale 0 -> brightness factor 0.1
    cfg.opSubset = {OpId::brightness};
    const Policy policy = makeRandaugmentPolicy(cfg);
    Image ones(4, 4);
    ones.pix.fill(1.0f);
    Rng rng(2);
    const Image out = applyPolicy(policy, ones, rng);
    CHECK(out.pix.data[0] == doctest::Approx(0.1).epsilon(1e-6));
  }
  SUBCASE("three-op subset gates at p = 1/3") {
    RandAugmentConfig cfg;
    cfg.nTau = 1;
    cfg.lambdaDiscrete = 30;
    cfg.opSubset = {OpId::invert, OpId::invert, OpId::invert};
    const Policy policy = makeRandaugmentPolicy(cfg);
    Image zeros(4, 4);
    Rng rng(31);
    int fired = 0;
    const int n = 9000;
    for (int i = 0; i < n; ++i) {
      fired += applyPolicy(policy, zeros, rng).pix.data[0] == 1.0f;
    }
    const double sigma = std::sqrt(n * (1.0 / 3) * (2.0 / 3));
    CHECK(fired > n / 3.0 - 4 * sigma);
    CHECK(fired < n / 3.0 + 4 * sigma);
  }
}

TEST_CASE("expected strength averages lambda * p") {
  Policy policy;
  policy.name = "s";
  policy.subPolicies.push_back(
      {{TransformSpec{OpId::rotate, 1.0, 0.5}, TransformSpec{OpId::invert, 0.5, 1.0}}});
  CHECK(expectedStrength(policy) == doctest::Approx(0.5));
}

TEST_CASE("augmenters are deterministic and size-preserving") {
  const Image img = gridImage(16, 16, 5);
  BasePipeline base;
  Rng a(8);
  Rng b(8);
  CHECK(bitIdentical(base.apply(img, a), base.apply(img, b)));
  SingleOpAugmenter single(OpId::rotate);
  Rng c(9);
  const Image out = single.apply(img, c);
  CHECK(out.height() == 16);
  CHECK(out.width() == 16);
  SingleOpAugmenter crop(OpId::randomResizeCrop);
  Rng d(10);
  CHECK(crop.apply(img, d).width() == 16);
}
