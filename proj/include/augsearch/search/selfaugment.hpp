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

#ifndef AUGSEARCH_SEARCH_SELFAUGMENT_HPP
#define AUGSEARCH_SEARCH_SELFAUGMENT_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "augsearch/contrastive/moco.hpp"
#include "augsearch/search/tpe.hpp"
#include "augsearch/sseval/probe.hpp"

namespace augsearch {

/// The four search objectives plus the weighted variant. Scores are
/// minimized.
enum class LossKind { minRot, minInfo, maxInfo, minimax, weightedMinimax };

const std::string& lossKindName(LossKind kind);
LossKind lossKindFromName(const std::string& name);

/// Base augmentation used to train the fold models: either the winning
/// single transformation (applied with p = 1 and a magnitude redrawn per
/// application, on top of a random flip) or an existing policy applied on
/// top of flip + crop.
struct BasePolicy {
  enum class Kind { singleOp, fixedPolicy };
  Kind kind = Kind::singleOp;
  OpId op = OpId::randomResizeCrop;
  Policy policy;
};

std::unique_ptr<ViewAugmenter> makeBaseAugmenter(const BasePolicy& base);
std::string serializeBasePolicy(const BasePolicy& base);
BasePolicy deserializeBasePolicy(const std::string& text);

struct SearchConfig {
  int K = 2;           // folds
  int T = 2;           // search iterations per fold
  int B = 10;          // trials per iteration
  int P = 3;           // sub-policies kept per iteration
  int nTauSearch = 2;  // transforms per candidate sub-policy
  LossKind lossKind = LossKind::minimax;
  double lambdaRot = 1.0;  // weightedMinimax only
  double lambdaNce = 1.0;
  /// When false the op sequence is fixed to fixedOps and only (p, lambda)
  /// are searched.
  bool searchOpIdentity = true;
  std::vector<OpId> fixedOps;
  /// Short-training budget for base-policy selection, as a fraction of the
  /// full epoch count.
  double baseEpochFraction = 0.1;
  std::optional<BasePolicy> fixedBase;
  TpeConfig tpe;
  int workers = 1;

  void validate() const {
    AUGS_REQUIRE(K >= 1 && T >= 1 && B >= 1 && P >= 1, "SearchConfig: K,T,B,P must be >= 1");
    AUGS_REQUIRE(P <= B, "SearchConfig: P must not exceed B");
    AUGS_REQUIRE(nTauSearch >= 1, "SearchConfig: nTauSearch must be >= 1");
    if (!searchOpIdentity) {
      AUGS_REQUIRE(static_cast<int>(fixedOps.size()) == nTauSearch,
                   "SearchConfig: fixedOps must hold nTauSearch ops");
    }
  }
};

/// Expected rotation and InfoNCE losses under the base augmentation,
/// averaged over the folds; both objectives are divided by these so they
/// contribute equally to the minimax losses.
struct LossNormalizer {
  double meanRot = 1.0;
  double meanNce = 1.0;
};

/// One fold's trained ingredients for candidate scoring.
struct FoldModel {
  EncoderState state;
  Linear<float> rotHead;
  std::vector<int> dM;
  std::vector<int> dA;
};

struct BaseSelectionReport {
  OpId op = OpId::invert;
  double probeLoss = 0.0;
  double probeTop1 = 0.0;
  bool diverged = false;
};

/// Trains one short MoCo run per candidate transformation (the 15 searchable
/// ops plus random-resize-crop), probes rotation on the frozen backbone and
/// returns the candidate with the lowest probe loss. Diverged candidates are
/// disqualified and reported.
BasePolicy selectBasePolicy(const Dataset& modelSplit, const MocoConfig& shortCfg,
                            const ProbeConfig& probeCfg, std::uint64_t seed, int workers,
                            std::vector<BaseSelectionReport>* reports = nullptr);

/// InfoNCE used when scoring candidates, with the distractors taken
/// literally from the loss definition: the other images' key views. Scoring
/// against the training queue instead lets a candidate win by pushing every
/// view into one off-distribution cluster the stale keys cannot contest.
double scoringInfoNce(const Tensor& q, const Tensor& k, double temperature);

struct LossParts {
  double rot = 0.0;
  double nce = 0.0;
};

/// Rotation and contrastive losses of the base augmentation itself on dA;
/// policyLoss of an empty candidate reproduces exactly these values.
LossParts baseLossParts(const FoldModel& model, const ViewAugmenter& base, const Dataset& dataset,
                        const std::vector<int>& dA, double temperature, std::uint64_t seed,
                        int featureBatch = 64);

/// Scores one candidate sub-policy on the fold's policy-evaluation half.
/// Forward passes only. Each view is the base pipeline's draw followed by
/// the candidate transforms (the base policy always precedes the searched
/// policy); then
///   minRot:  rotation cross-entropy of the frozen rotation head
///   minInfo: scoring InfoNCE of two views
///   maxInfo: the negation
///   minimax / weightedMinimax: normalized combinations per the normalizer.
double policyLoss(LossKind kind, const FoldModel& model, const ViewAugmenter& base,
                  const std::vector<TransformSpec>& candidate, const Dataset& dataset,
                  const std::vector<int>& dA, double temperature,
                  const LossNormalizer& normalizer, double lambdaRot, double lambdaNce,
                  std::uint64_t seed, int featureBatch = 64);

struct TrialRecord {
  int foldId = 0;
  int iterId = 0;
  int trialIdx = 0;
  std::vector<TransformSpec> candidate;
  LossKind lossKind = LossKind::minimax;
  double score = 0.0;  // NaN when the trial was rejected
  std::uint64_t seed = 0;
};

/// Fold models, base policy and loss normalizer are shared across search
/// phases: new loss functions reuse them without retraining.
struct SelfAugmentSession {
  BasePolicy base;
  std::vector<BaseSelectionReport> baseReports;
  std::vector<FoldModel> folds;
  LossNormalizer normalizer;
  double temperature = 0.2;
  std::unique_ptr<ViewAugmenter> baseAugmenter;
};

SelfAugmentSession prepareSession(const Dataset& dataset, const SearchConfig& cfg,
                                  const MocoConfig& mocoCfg, const ProbeConfig& probeCfg,
                                  std::uint64_t seed);

struct SearchPhaseResult {
  Policy policy;
  std::vector<TrialRecord> trials;
};

/// The search loop of Algorithm 1: per fold, T iterations of B TPE-proposed
/// trials each; the top-P trials of every iteration merge into the final
/// policy, so it holds K*T*P sub-policies.
SearchPhaseResult searchPolicies(const SelfAugmentSession& session, const Dataset& dataset,
                                 const SearchConfig& cfg, std::uint64_t seed);

struct SelfAugmentResult {
  Policy policy;
  std::vector<TrialRecord> trials;
  BasePolicy base;
  std::vector<BaseSelectionReport> baseReports;
  LossNormalizer normalizer;
};

/// Full Algorithm 1: base-policy selection (unless fixed), fold training,
/// Bayesian policy exploration, top-P merging.
SelfAugmentResult runSelfAugment(const Dataset& dataset, const SearchConfig& cfg,
                                 const MocoConfig& mocoCfg, const ProbeConfig& probeCfg,
                                 std::uint64_t seed);

/// JSON-lines trial log: {foldId, iterId, trialIdx, candidate, lossKind,
/// score, seed}; rejected trials carry a null score.
void writeTrialLog(const std::string& path, const std::vector<TrialRecord>& trials);

}  // namespace augsearch

#endif  // AUGSEARCH_SEARCH_SELFAUGMENT_HPP
