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

#ifndef AUGSEARCH_POLICY_POLICY_HPP
#define AUGSEARCH_POLICY_POLICY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "augsearch/core/rng.hpp"
#include "augsearch/imageops/transforms.hpp"

namespace augsearch {

/// One gated transformation: op applied with probability p at unit-scale
/// magnitude lambda.
struct TransformSpec {
  OpId op = OpId::invert;
  double p = 1.0;
  double lambda = 0.5;
};

/// Ordered transformations applied sequentially; order is significant.
struct SubPolicy {
  std::vector<TransformSpec> transforms;
};

/// Where a policy came from: which loss drove the search, which seeds and
/// folds produced its sub-policies.
struct Provenance {
  std::string lossKind;
  std::vector<std::uint64_t> seeds;
  std::vector<int> foldIds;
};

/// Shared-magnitude sampling configuration: every application draws nTau ops
/// uniformly from opSubset, each gated at p = 1/|opSubset|, all at the
/// single discrete magnitude.
struct RandAugmentConfig {
  int nTau = 2;
  int lambdaDiscrete = 9;  // in [1, 30]
  std::vector<OpId> opSubset;
};

/// An augmentation policy. Either an explicit collection of sub-policies
/// (the searched form) or a lazily-sampled RandAugment form.
struct Policy {
  std::string name;
  std::vector<SubPolicy> subPolicies;
  std::optional<RandAugmentConfig> randaugment;
  Provenance provenance;
};

/// Throws ContractError when fields are out of range or the policy is empty.
void validatePolicy(const Policy& policy);

/// Wraps a RandAugment configuration as a lazily-sampled policy.
/// Empty opSubset or out-of-range fields throw.
Policy makeRandaugmentPolicy(const RandAugmentConfig& cfg);

/// Samples one sub-policy uniformly, then walks its transforms in order,
/// each gated by an independent Bernoulli(p) draw.
Image applyPolicy(const Policy& policy, const Image& img, Rng& rng);

/// Canonical JSON: keys sorted, floats printed with six decimal places, no
/// whitespace. Identical policies serialize byte-identically.
std::string serializePolicy(const Policy& policy);

/// Parses the canonical schema. Malformed documents, unknown op names and
/// out-of-range fields raise ParseError naming the offending field.
Policy deserializePolicy(const std::string& text);

/// Mean over sub-policy transforms of lambda * p; the expected augmentation
/// strength used to compare searched policies.
double expectedStrength(const Policy& policy);

}  // namespace augsearch

#endif  // AUGSEARCH_POLICY_POLICY_HPP
