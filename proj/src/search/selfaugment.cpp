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

#include "augsearch/search/selfaugment.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>

#include "augsearch/core/parallel.hpp"
#include "augsearch/nn/loss.hpp"

namespace augsearch {

namespace {

const std::map<LossKind, std::string> kLossNames = {
    {LossKind::minRot, "minRot"},
    {LossKind::minInfo, "minInfo"},
    {LossKind::maxInfo, "maxInfo"},
    {LossKind::minimax, "minimax"},
    {LossKind::weightedMinimax, "weightedMinimax"},
};

std::uint64_t mix(std::uint64_t a, std::uint64_t b, std::uint64_t c = 0) {
  std::uint64_t h = a * 0x9e3779b97f4a7c15ULL + b * 0xd1342543de82ef95ULL + c + 0x2545f4914f6cdd1dULL;
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 29;
  return h;
}

Image applyCandidate(const std::vector<TransformSpec>& candidate, const Image& img, Rng& rng) {
  Image out = img;
  for (const TransformSpec& t : candidate) {
    if (rng.bernoulli(t.p)) {
      out = applyTransform(out, t.op, magnitudeToParam(t.op, t.lambda), rng);
    }
  }
  return out;
}

}  // namespace

double scoringInfoNce(const Tensor& q, const Tensor& k, double temperature) {
  const int n = q.dim(0);
  const int d = q.dim(1);
  AUGS_REQUIRE(n >= 2, "scoringInfoNce: need at least two samples");
  double acc = 0.0;
  std::vector<double> logits;
  for (int i = 0; i < n; ++i) {
    logits.clear();
    const float* qi = q.data.data() + q.offset({i, 0});
    auto dot = [&](const float* row) {
      double s = 0.0;
      for (int j = 0; j < d; ++j) s += static_cast<double>(qi[j]) * row[j];
      return s / temperature;
    };
    logits.push_back(dot(k.data.data() + k.offset({i, 0})));  // positive at index 0
    for (int j = 0; j < n; ++j) {
      if (j != i) logits.push_back(dot(k.data.data() + k.offset({j, 0})));
    }
    const double mx = *std::max_element(logits.begin(), logits.end());
    double denom = 0.0;
    for (double v : logits) denom += std::exp(v - mx);
    acc += mx + std::log(denom) - logits[0];
  }
  AUGS_REQUIRE(std::isfinite(acc), "scoringInfoNce: non-finite loss");
  return acc / n;
}

namespace {

/// Shared scoring machinery: one view per image for the rotation term, two
/// independent views for the contrastive term, all forward passes on the
/// fold's frozen encoders.
template <typename ViewFn>
LossParts evalLossParts(const FoldModel& model, const Dataset& dataset,
                        const std::vector<int>& dA, ViewFn makeView, double temperature,
                        bool wantRot, bool wantNce, std::uint64_t seed, int featureBatch) {
  AUGS_REQUIRE(!dA.empty(), "policyLoss: empty evaluation split");
  const Rng root(seed);
  LossParts parts;

  if (wantRot) {
    std::vector<Image> views;
    views.reserve(dA.size());
    for (std::size_t i = 0; i < dA.size(); ++i) {
      Rng rng = root.fork(mix(1, i));
      views.push_back(makeView(dataset.images[static_cast<std::size_t>(dA[i])], rng));
    }
    const LabelledBatch rot = rotateBatch(views);
    const Tensor feats = extractFeatures(model.state.query, rot.images, featureBatch);
    Linear<float> head = model.rotHead;
    const auto ce = softmaxCrossEntropy<float>(head.forward(feats), rot.labels);
    parts.rot = ce.loss;
  }

  if (wantNce) {
    std::vector<Image> qViews, kViews;
    qViews.reserve(dA.size());
    kViews.reserve(dA.size());
    for (std::size_t i = 0; i < dA.size(); ++i) {
      Rng rngQ = root.fork(mix(2, i));
      Rng rngK = root.fork(mix(3, i));
      qViews.push_back(makeView(dataset.images[static_cast<std::size_t>(dA[i])], rngQ));
      kViews.push_back(makeView(dataset.images[static_cast<std::size_t>(dA[i])], rngK));
    }
    Encoder<float> query = model.state.query;
    Encoder<float> key = model.state.key;
    const int n = static_cast<int>(dA.size());
    double acc = 0.0;
    for (int start = 0; start < n; start += featureBatch) {
      const int count = std::min(featureBatch, n - start);
      std::vector<Tensor> qChunk, kChunk;
      for (int i = 0; i < count; ++i) {
        qChunk.push_back(qViews[static_cast<std::size_t>(start + i)].pix);
        kChunk.push_back(kViews[static_cast<std::size_t>(start + i)].pix);
      }
      const auto qOut = query.forward(stackImages<float>(qChunk));
      const auto kOut = key.forward(stackImages<float>(kChunk));
      acc += scoringInfoNce(qOut.projections, kOut.projections, temperature) * count;
    }
    parts.nce = acc / n;
  }
  return parts;
}

}  // namespace

LossParts baseLossParts(const FoldModel& model, const ViewAugmenter& base, const Dataset& dataset,
                        const std::vector<int>& dA, double temperature, std::uint64_t seed,
                        int featureBatch) {
  auto view = [&base](const Image& img, Rng& rng) { return base.apply(img, rng); };
  return evalLossParts(model, dataset, dA, view, temperature, true, true, seed, featureBatch);
}

const std::string& lossKindName(LossKind kind) { return kLossNames.at(kind); }

LossKind lossKindFromName(const std::string& name) {
  for (const auto& [kind, n] : kLossNames) {
    if (n == name) return kind;
  }
  throw ParseError("unknown loss kind: \"" + name + "\"");
}

std::unique_ptr<ViewAugmenter> makeBaseAugmenter(const BasePolicy& base) {
  if (base.kind == BasePolicy::Kind::singleOp) {
    return std::make_unique<SingleOpAugmenter>(base.op);
  }
  return std::make_unique<PolicyAugmenter>(base.policy);
}

std::string serializeBasePolicy(const BasePolicy& base) {
  if (base.kind == BasePolicy::Kind::singleOp) {
    return "{\"kind\":\"singleOp\",\"op\":\"" + opName(base.op) + "\"}";
  }
  return "{\"kind\":\"policy\",\"policy\":" + serializePolicy(base.policy) + "}";
}

BasePolicy deserializeBasePolicy(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("base policy document: ") + e.what());
  }
  try {
    BasePolicy base;
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "singleOp") {
      base.kind = BasePolicy::Kind::singleOp;
      base.op = opFromName(doc.at("op").get<std::string>());
    } else if (kind == "policy") {
      base.kind = BasePolicy::Kind::fixedPolicy;
      base.policy = deserializePolicy(doc.at("policy").dump());
    } else {
      throw ParseError("base policy document: unknown kind \"" + kind + "\"");
    }
    return base;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("base policy document: ") + e.what());
  }
}

BasePolicy selectBasePolicy(const Dataset& modelSplit, const MocoConfig& shortCfg,
                            const ProbeConfig& probeCfg, std::uint64_t seed, int workers,
                            std::vector<BaseSelectionReport>* reports) {
  std::vector<OpId> candidates(kSearchableOps.begin(), kSearchableOps.end());
  candidates.push_back(OpId::randomResizeCrop);
  std::vector<BaseSelectionReport> results(candidates.size());
  const Rng root(seed);
  parallelFor(candidates.size(), workers, [&](std::size_t i) {
    BaseSelectionReport& report = results[i];
    report.op = candidates[i];
    try {
      SingleOpAugmenter augmenter(candidates[i]);
      const auto trained =
          trainMoco(modelSplit, augmenter, shortCfg, root.fork(mix(11, i)).nextU64() >> 8);
      const auto probe = trainProbe(trained.state.query, ProbeTask::rotation(), modelSplit,
                                    probeCfg, root.fork(mix(12, i)).nextU64() >> 8);
      report.probeLoss = probe.evalLoss;
      report.probeTop1 = probe.top1;
    } catch (const std::exception& e) {
      report.diverged = true;
      std::cerr << "base policy sweep: candidate " << opName(candidates[i])
                << " disqualified: " << e.what() << "\n";
    }
  });
  const BaseSelectionReport* best = nullptr;
  for (const auto& r : results) {
    if (r.diverged) continue;
    if (best == nullptr || r.probeLoss < best->probeLoss) best = &r;
  }
  if (best == nullptr) throw Error("selectBasePolicy: every candidate diverged");
  if (reports != nullptr) *reports = results;
  BasePolicy base;
  base.kind = BasePolicy::Kind::singleOp;
  base.op = best->op;
  return base;
}

double policyLoss(LossKind kind, const FoldModel& model, const ViewAugmenter& base,
                  const std::vector<TransformSpec>& candidate, const Dataset& dataset,
                  const std::vector<int>& dA, double temperature,
                  const LossNormalizer& normalizer, double lambdaRot, double lambdaNce,
                  std::uint64_t seed, int featureBatch) {
  for (const TransformSpec& t : candidate) {
    AUGS_REQUIRE(isSearchable(t.op), "policyLoss: candidate op must be searchable");
    AUGS_REQUIRE(t.p >= 0.0 && t.p <= 1.0 && t.lambda >= 0.0 && t.lambda <= 1.0,
                 "policyLoss: candidate fields outside [0,1]");
  }
  const bool wantRot = kind == LossKind::minRot || kind == LossKind::minimax ||
                       kind == LossKind::weightedMinimax;
  const bool wantNce = kind != LossKind::minRot;
  auto view = [&base, &candidate](const Image& img, Rng& rng) {
    return applyCandidate(candidate, base.apply(img, rng), rng);
  };
  const LossParts parts = evalLossParts(model, dataset, dA, view, temperature, wantRot, wantNce,
                                        seed, featureBatch);
  double score = 0.0;
  switch (kind) {
    case LossKind::minRot:
      score = parts.rot;
      break;
    case LossKind::minInfo:
      score = parts.nce;
      break;
    case LossKind::maxInfo:
      score = -parts.nce;
      break;
    case LossKind::minimax:
      score = parts.rot / normalizer.meanRot - parts.nce / normalizer.meanNce;
      break;
    case LossKind::weightedMinimax:
      score = lambdaRot * (parts.rot / normalizer.meanRot) -
              lambdaNce * (parts.nce / normalizer.meanNce);
      break;
  }
  AUGS_REQUIRE(std::isfinite(score), "policyLoss: non-finite score");
  return score;
}

SelfAugmentSession prepareSession(const Dataset& dataset, const SearchConfig& cfg,
                                  const MocoConfig& mocoCfg, const ProbeConfig& probeCfg,
                                  std::uint64_t seed) {
  cfg.validate();
  mocoCfg.validate();
  SelfAugmentSession session;
  session.temperature = mocoCfg.temperature;
  const Rng root(seed);

  const auto folds = kfoldSplit(static_cast<int>(dataset.size()), cfg.K,
                                root.fork(21).nextU64() >> 8);

  if (cfg.fixedBase) {
    session.base = *cfg.fixedBase;
  } else {
    MocoConfig shortCfg = mocoCfg;
    shortCfg.epochs = std::max(
        1, static_cast<int>(std::lround(mocoCfg.epochs * cfg.baseEpochFraction)));
    const Dataset firstSplit = gather(dataset, folds[0].dM);
    session.base = selectBasePolicy(firstSplit, shortCfg, probeCfg,
                                    root.fork(22).nextU64() >> 8, cfg.workers,
                                    &session.baseReports);
  }

  session.folds.resize(folds.size());
  session.baseAugmenter = makeBaseAugmenter(session.base);
  const ViewAugmenter& augmenter = *session.baseAugmenter;
  parallelFor(folds.size(), cfg.workers, [&](std::size_t k) {
    const Dataset modelSplit = gather(dataset, folds[k].dM);
    MocoTrainResult trained;
    try {
      trained = trainMoco(modelSplit, augmenter, mocoCfg, root.fork(mix(23, k)).nextU64() >> 8);
    } catch (const Error&) {
      // One retry with a fresh stream before giving up on the fold.
      trained = trainMoco(modelSplit, augmenter, mocoCfg, root.fork(mix(24, k)).nextU64() >> 8);
    }
    const auto probe = trainProbe(trained.state.query, ProbeTask::rotation(), modelSplit,
                                  probeCfg, root.fork(mix(25, k)).nextU64() >> 8);
    session.folds[k].state = std::move(trained.state);
    session.folds[k].rotHead = probe.head;
    session.folds[k].dM = folds[k].dM;
    session.folds[k].dA = folds[k].dA;
  });

  // Expected losses under the base augmentation, averaged over folds.
  double rotAcc = 0.0;
  double nceAcc = 0.0;
  for (std::size_t k = 0; k < session.folds.size(); ++k) {
    const LossParts parts =
        baseLossParts(session.folds[k], augmenter, dataset, session.folds[k].dA,
                      session.temperature, root.fork(mix(26, k)).nextU64() >> 8);
    rotAcc += parts.rot;
    nceAcc += parts.nce;
  }
  session.normalizer.meanRot = rotAcc / static_cast<double>(session.folds.size());
  session.normalizer.meanNce = nceAcc / static_cast<double>(session.folds.size());
  AUGS_REQUIRE(session.normalizer.meanRot > 0.0 && session.normalizer.meanNce > 0.0,
               "prepareSession: loss normalizer must be positive");
  return session;
}

namespace {

std::vector<SearchSlot> candidateSpace(const SearchConfig& cfg) {
  std::vector<SearchSlot> slots;
  for (int s = 0; s < cfg.nTauSearch; ++s) {
    if (cfg.searchOpIdentity) slots.push_back(SearchSlot::categorical(kNumSearchableOps));
    slots.push_back(SearchSlot::continuous(0.0, 1.0));  // p
    slots.push_back(SearchSlot::continuous(0.0, 1.0));  // lambda
  }
  return slots;
}

std::vector<TransformSpec> decodeCandidate(const SearchConfig& cfg, const std::vector<double>& x) {
  std::vector<TransformSpec> out;
  std::size_t j = 0;
  for (int s = 0; s < cfg.nTauSearch; ++s) {
    TransformSpec spec;
    if (cfg.searchOpIdentity) {
      spec.op = kSearchableOps[static_cast<std::size_t>(std::lround(x[j++]))];
    } else {
      spec.op = cfg.fixedOps[static_cast<std::size_t>(s)];
    }
    spec.p = x[j++];
    spec.lambda = x[j++];
    out.push_back(spec);
  }
  return out;
}

}  // namespace

SearchPhaseResult searchPolicies(const SelfAugmentSession& session, const Dataset& dataset,
                                 const SearchConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const Rng root(seed);
  const TpeSampler sampler(candidateSpace(cfg), cfg.tpe);

  SearchPhaseResult result;
  result.policy.name = "selfaugment-" + lossKindName(cfg.lossKind);
  result.policy.provenance.lossKind = lossKindName(cfg.lossKind);
  result.policy.provenance.seeds = {seed};

  for (int k = 0; k < cfg.K; ++k) {
    result.policy.provenance.foldIds.push_back(k);
    const FoldModel& model = session.folds[static_cast<std::size_t>(k)];
    std::vector<TpeTrial> history;
    for (int t = 0; t < cfg.T; ++t) {
      // All B proposals of one iteration come from the same history, so the
      // iteration can be scored in parallel and committed in trial order.
      std::vector<std::vector<double>> xs(static_cast<std::size_t>(cfg.B));
      for (int b = 0; b < cfg.B; ++b) {
        Rng proposeRng = root.fork(mix(31, static_cast<std::uint64_t>(k),
                                       static_cast<std::uint64_t>(t * cfg.B + b)));
        xs[static_cast<std::size_t>(b)] = sampler.suggest(history, proposeRng);
      }
      std::vector<TrialRecord> iterTrials(static_cast<std::size_t>(cfg.B));
      parallelFor(static_cast<std::size_t>(cfg.B), cfg.workers, [&](std::size_t b) {
        TrialRecord& record = iterTrials[b];
        record.foldId = k;
        record.iterId = t;
        record.trialIdx = static_cast<int>(b);
        record.lossKind = cfg.lossKind;
        record.candidate = decodeCandidate(cfg, xs[b]);
        record.seed = root.fork(mix(32, static_cast<std::uint64_t>(k),
                                    static_cast<std::uint64_t>(t * cfg.B) + b))
                          .nextU64() >>
                      8;
        try {
          record.score = policyLoss(cfg.lossKind, model, *session.baseAugmenter, record.candidate,
                                    dataset, model.dA, session.temperature, session.normalizer,
                                    cfg.lambdaRot, cfg.lambdaNce, record.seed);
        } catch (const std::exception& e) {
          record.score = std::numeric_limits<double>::quiet_NaN();
          std::cerr << "trial rejected (fold " << k << ", iter " << t << ", trial " << b
                    << "): " << e.what() << "\n";
        }
      });
      std::vector<std::size_t> ranked;
      for (std::size_t b = 0; b < iterTrials.size(); ++b) {
        if (std::isfinite(iterTrials[b].score)) {
          ranked.push_back(b);
          history.push_back({xs[b], iterTrials[b].score});
        }
      }
      AUGS_REQUIRE(static_cast<int>(ranked.size()) >= cfg.P,
                   "searchPolicies: fewer valid trials than P in one iteration");
      // Stable top-P; ties break by trial seed.
      std::stable_sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) {
        if (iterTrials[a].score != iterTrials[b].score) {
          return iterTrials[a].score < iterTrials[b].score;
        }
        return iterTrials[a].seed < iterTrials[b].seed;
      });
      for (int p = 0; p < cfg.P; ++p) {
        result.policy.subPolicies.push_back({iterTrials[ranked[static_cast<std::size_t>(p)]].candidate});
      }
      for (auto& record : iterTrials) result.trials.push_back(std::move(record));
    }
  }
  validatePolicy(result.policy);
  return result;
}

SelfAugmentResult runSelfAugment(const Dataset& dataset, const SearchConfig& cfg,
                                 const MocoConfig& mocoCfg, const ProbeConfig& probeCfg,
                                 std::uint64_t seed) {
  const SelfAugmentSession session = prepareSession(dataset, cfg, mocoCfg, probeCfg, seed);
  SearchPhaseResult phase = searchPolicies(session, dataset, cfg, seed);
  SelfAugmentResult result;
  result.policy = std::move(phase.policy);
  result.trials = std::move(phase.trials);
  result.base = session.base;
  result.baseReports = session.baseReports;
  result.normalizer = session.normalizer;
  return result;
}

void writeTrialLog(const std::string& path, const std::vector<TrialRecord>& trials) {
  std::ofstream out(path);
  if (!out) throw IoError("trial log: cannot write " + path);
  char buf[64];
  for (const auto& trial : trials) {
    out << "{\"foldId\":" << trial.foldId << ",\"iterId\":" << trial.iterId
        << ",\"trialIdx\":" << trial.trialIdx << ",\"candidate\":[";
    for (std::size_t i = 0; i < trial.candidate.size(); ++i) {
      const auto& t = trial.candidate[i];
      if (i) out << ",";
      std::snprintf(buf, sizeof(buf), "{\"lambda\":%.6f,\"op\":\"%s\",\"p\":%.6f}", t.lambda,
                    opName(t.op).c_str(), t.p);
      out << buf;
    }
    out << "],\"lossKind\":\"" << lossKindName(trial.lossKind) << "\",\"score\":";
    if (std::isfinite(trial.score)) {
      std::snprintf(buf, sizeof(buf), "%.6f", trial.score);
      out << buf;
    } else {
      out << "null";
    }
    out << ",\"seed\":" << trial.seed << "}\n";
  }
}

}  // namespace augsearch
