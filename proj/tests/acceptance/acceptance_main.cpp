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

// Acceptance suite: one pass/fail line per criterion. Pass a list of
// criterion ids (e.g. "1 5 7s") to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "augsearch/analytics/report.hpp"
#include "augsearch/analytics/stats.hpp"
#include "augsearch/cli/run_config.hpp"
#include "augsearch/nn/gradcheck.hpp"
#include "augsearch/nn/loss.hpp"
#include "augsearch/search/randaugment_search.hpp"
#include "augsearch/search/selfaugment.hpp"
#include "transform_reference.hpp"

using namespace augsearch;

namespace {

struct SkipCriterion {
  std::string reason;
};

struct CheckFailure {
  std::string message;
};

void require(bool condition, const std::string& message) {
  if (!condition) throw CheckFailure{message};
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

// ---------------------------------------------------------------- criterion 1

Image fixedTestImage(std::uint64_t seed) {
  Image img(8, 8);
  Rng rng(seed);
  for (auto& v : img.pix.data) v = static_cast<float>(rng.uniform());
  return img;
}

std::string criterion1() {
  int compared = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Image img = fixedTestImage(seed);
    for (OpId op : kSearchableOps) {
      for (double lambda : {0.0, 0.5, 1.0}) {
        const double param = magnitudeToParam(op, lambda);
        require(param == testref::refMagnitudeToParam(op, lambda),
                "magnitude mapping differs for " + opName(op));
        Rng rngImpl(seed * 1009 + 17);
        Rng rngRef(seed * 1009 + 17);
        const Image got = applyTransform(img, op, param, rngImpl);
        const Image want = testref::refApplyTransform(img, op, param, rngRef);
        const bool geometric = op == OpId::shearX || op == OpId::shearY ||
                               op == OpId::translateX || op == OpId::translateY ||
                               op == OpId::rotate;
        for (std::size_t i = 0; i < got.pix.data.size(); ++i) {
          const float a = got.pix.data[i];
          const float b = want.pix.data[i];
          if (geometric) {
            require(std::fabs(a - b) <= 2.4e-7f,
                    fmt("%s lambda=%.1f pixel %zu: %.9g vs %.9g", opName(op).c_str(), lambda, i,
                        a, b));
          } else {
            require(a == b, fmt("%s lambda=%.1f pixel %zu: %.9g vs %.9g (exact)",
                                opName(op).c_str(), lambda, i, a, b));
          }
        }
        ++compared;
      }
    }
  }
  return fmt("5 images x 15 ops x 3 magnitudes (%d transforms, value ops exact)", compared);
}

// ---------------------------------------------------------------- criterion 2

std::string criterion2() {
  // Default desk encoder, double instantiation, InfoNCE objective.
  EncoderConfig desk;  // 16/32/64/128 on 32x32 inputs
  Encoder<double> enc(desk);
  Rng rng(21);
  enc.init(rng);
  TensorT<double> batch({4, 3, 32, 32});
  Rng brng(22);
  for (auto& v : batch.data) v = brng.uniform();
  const int d = desk.projectionDim;
  TensorT<double> kPos({4, d});
  TensorT<double> queue({16, d});
  auto unitFill = [](TensorT<double>& m, std::uint64_t seed) {
    Rng r(seed);
    for (int i = 0; i < m.dim(0); ++i) {
      double acc = 0.0;
      std::vector<double> row(static_cast<std::size_t>(m.dim(1)));
      for (auto& v : row) {
        v = r.normal();
        acc += v * v;
      }
      for (int j = 0; j < m.dim(1); ++j) {
        m.at({i, j}) = row[static_cast<std::size_t>(j)] / std::sqrt(acc);
      }
    }
  };
  unitFill(kPos, 23);
  unitFill(queue, 24);

  enc.zeroGrad();
  auto out = enc.forward(batch);
  auto nce = infonceLoss<double>(out.projections, kPos, queue, 0.2, true);
  enc.backwardFromProjections(nce.dq);
  auto params = enc.params();
  auto lossFn = [&]() {
    return infonceLoss<double>(enc.forward(batch).projections, kPos, queue, 0.2, false).loss;
  };
  Rng pick(25);
  const double encoderErr = gradCheck(params, lossFn, 1e-6, 2, pick);
  require(encoderErr < 1e-3, fmt("encoder max relative error %.3g >= 1e-3", encoderErr));

  Linear<double> head(desk.featureDim(), 10);
  Rng hrng(26);
  head.init(hrng);
  TensorT<double> feats({16, desk.featureDim()});
  Rng frng(27);
  for (auto& v : feats.data) v = frng.normal();
  std::vector<int> labels;
  Rng lrng(28);
  for (int i = 0; i < 16; ++i) labels.push_back(lrng.uniformInt(10));
  std::vector<ParamView<double>> headParams;
  head.collectParams("head", headParams);
  for (auto& p : headParams) p.grad->fill(0.0);
  auto ce = softmaxCrossEntropy<double>(head.forward(feats), labels);
  head.backward(ce.grad);
  auto headLoss = [&]() { return softmaxCrossEntropy<double>(head.forward(feats), labels).loss; };
  Rng hpick(29);
  const double headErr = gradCheck(headParams, headLoss, 1e-5, 10, hpick);
  require(headErr < 1e-4, fmt("linear head max relative error %.3g >= 1e-4", headErr));
  return fmt("encoder %.2e < 1e-3, linear head %.2e < 1e-4", encoderErr, headErr);
}

// ---------------------------------------------------------------- criterion 3

std::string criterion3() {
  // Uniform similarities with K = 8.
  Tensor q({4, 3}), kPos({4, 3}), queue({8, 3});
  for (int i = 0; i < 4; ++i) {
    q.at({i, 0}) = 1.0f;
    kPos.at({i, 1}) = 1.0f;
  }
  for (int i = 0; i < 8; ++i) queue.at({i, 1}) = 1.0f;
  const auto uniform = infonceLoss<float>(q, kPos, queue, 0.2, false);
  require(std::abs(uniform.loss - std::log(9.0)) < 1e-6,
          fmt("uniform-similarity loss %.9f != ln 9", uniform.loss));

  // Two-sample hand case against a scalar oracle.
  const double t = 0.3;
  const double qa[2] = {0.3, 1.9}, ka[2] = {0.5, 1.4}, na[2] = {2.8, 4.0};
  Tensor q2({2, 2}), k2({2, 2}), n2({2, 2});
  for (int i = 0; i < 2; ++i) {
    q2.at({i, 0}) = static_cast<float>(std::cos(qa[i]));
    q2.at({i, 1}) = static_cast<float>(std::sin(qa[i]));
    k2.at({i, 0}) = static_cast<float>(std::cos(ka[i]));
    k2.at({i, 1}) = static_cast<float>(std::sin(ka[i]));
    n2.at({i, 0}) = static_cast<float>(std::cos(na[i]));
    n2.at({i, 1}) = static_cast<float>(std::sin(na[i]));
  }
  double oracle = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double lp = std::cos(qa[i] - ka[i]) / t;
    const double l1 = std::cos(qa[i] - na[0]) / t;
    const double l2 = std::cos(qa[i] - na[1]) / t;
    oracle += -lp + std::log(std::exp(lp) + std::exp(l1) + std::exp(l2));
  }
  oracle /= 2.0;
  const auto hand = infonceLoss<float>(q2, k2, n2, t, false);
  require(std::abs(hand.loss - oracle) < 1e-6,
          fmt("two-sample loss %.9f vs oracle %.9f", hand.loss, oracle));
  return fmt("ln(9) within 1e-6; hand-computed case within 1e-6");
}

// ---------------------------------------------------------------- criterion 4

std::string criterion4() {
  // m = 1, lr = 0 fixed point, bit-exact.
  Dataset data = genSynthetic(2, 16, {16, 16}, 31);
  MocoConfig cfg;
  cfg.queueSize = 16;
  cfg.batchSize = 16;
  cfg.epochs = 1;
  cfg.momentum = 1.0;
  cfg.encoder.channels = {8, 16};
  cfg.encoder.strides = {1, 2};
  cfg.encoder.projectionDim = 8;
  cfg.sgd.lr = 0.0;
  cfg.sgd.weightDecay = 0.0;
  EncoderState ref = makeEncoderState(cfg, 77);
  auto result = trainMoco(data, BasePipeline(), cfg, 77);
  auto pa = ref.query.params();
  auto pb = result.state.query.params();
  for (std::size_t i = 0; i < pa.size(); ++i) {
    require(pa[i].value->data == pb[i].value->data, "query parameters changed at " + pa[i].name);
  }
  auto ka = ref.key.params();
  auto kb = result.state.key.params();
  for (std::size_t i = 0; i < ka.size(); ++i) {
    require(ka[i].value->data == kb[i].value->data, "key parameters changed at " + ka[i].name);
  }

  // FIFO queue.
  MocoConfig qcfg = cfg;
  qcfg.queueSize = 4;
  qcfg.batchSize = 2;
  EncoderState state = makeEncoderState(qcfg, 3);
  for (int i = 0; i < 4; ++i) {
    Tensor key({1, qcfg.encoder.projectionDim});
    key.at({0, i % qcfg.encoder.projectionDim}) = 1.0f;
    enqueue(state, key);
  }
  for (int r = 0; r < 4; ++r) {
    require(state.queue.at({r, r}) == 1.0f, "queue is not FIFO-ordered");
  }
  require(state.cursor == 0, "cursor did not wrap");

  // Init loss in the uniform-logit regime: desk defaults, K = 512.
  MocoConfig desk;
  EncoderState fresh = makeEncoderState(desk, 7);
  Rng rng(9);
  Tensor q({64, desk.encoder.projectionDim}), kPos({64, desk.encoder.projectionDim});
  auto fillUnit = [&](Tensor& m) {
    for (int i = 0; i < m.dim(0); ++i) {
      double acc = 0.0;
      std::vector<double> row(static_cast<std::size_t>(m.dim(1)));
      for (auto& v : row) {
        v = rng.normal();
        acc += v * v;
      }
      for (int j = 0; j < m.dim(1); ++j) {
        m.at({i, j}) = static_cast<float>(row[static_cast<std::size_t>(j)] / std::sqrt(acc));
      }
    }
  };
  fillUnit(q);
  fillUnit(kPos);
  const auto nce = infonceLoss<float>(q, kPos, fresh.queue, desk.temperature, false);
  const double expected = std::log(desk.queueSize + 1);
  require(std::abs(nce.loss - expected) / expected < 0.10,
          fmt("init loss %.4f not within 10%% of ln(%d)=%.4f", nce.loss, desk.queueSize + 1,
              expected));
  return fmt("fixed point bit-exact; FIFO ok; init loss %.3f ~ ln(513)=%.3f", nce.loss, expected);
}

// ---------------------------------------------------------------- criterion 5

std::string criterion5() {
  require(std::abs(spearman({1, 2, 3}, {10, 20, 30}) - 1.0) < 1e-12, "monotone rho != 1");
  require(std::abs(spearman({1, 2, 3}, {3, 2, 1}) + 1.0) < 1e-12, "antitone rho != -1");
  const double viaFormula = 1.0 - 6.0 * 4.0 / (5.0 * 24.0);  // rank-formula oracle
  require(std::abs(spearman({1, 2, 3, 4, 5}, {2, 1, 4, 3, 5}) - viaFormula) < 1e-12,
          "rho != 0.8 on the rank-formula case");

  Tensor x({30, 6});
  Rng rng(41);
  for (auto& v : x.data) v = static_cast<float>(rng.normal());
  require(std::abs(rv2(x, x) - 1.0) < 1e-9, "rv2 self-similarity off");
  Tensor scaled = x;
  for (auto& v : scaled.data) v *= -2.5f;
  require(std::abs(rv2(x, scaled) - 1.0) < 1e-9, "rv2 scaling invariance off");

  double worst = 0.0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    Tensor a({200, 6}), b({200, 6});
    Rng ra(1000 + s), rb(5000 + s);
    for (auto& v : a.data) v = static_cast<float>(ra.normal());
    for (auto& v : b.data) v = static_cast<float>(rb.normal());
    worst = std::max(worst, std::abs(rv2(a, b)));
  }
  require(worst < 0.1, fmt("independent-matrix |rv2| reached %.4f", worst));
  return fmt("spearman 1/-1/0.8 exact; rv2 self/scale within 1e-9; MC worst %.4f < 0.1", worst);
}

// ---------------------------------------------------------------- criterion 6

std::string criterion6() {
  const int trials = 60;
  const TpeSampler tpe({SearchSlot::continuous(0.0, 1.0)}, {});
  std::vector<int> tpeHits, uniHits;
  int within = 0;
  for (int seed = 1; seed <= 20; ++seed) {
    Rng rng(static_cast<std::uint64_t>(seed));
    std::vector<TpeTrial> history;
    int hit = trials + 1;
    double best = 1e18, bestLambda = -1.0;
    for (int t = 0; t < trials; ++t) {
      const auto x = tpe.suggest(history, rng);
      const double f = (x[0] - 0.5) * (x[0] - 0.5);
      history.push_back({x, f});
      if (std::abs(x[0] - 0.5) <= 0.05 && hit > trials) hit = t + 1;
      if (f < best) {
        best = f;
        bestLambda = x[0];
      }
    }
    tpeHits.push_back(hit);
    within += std::abs(bestLambda - 0.5) <= 0.1;

    Rng urng(static_cast<std::uint64_t>(seed));
    int uniHit = trials + 1;
    for (int t = 0; t < trials; ++t) {
      if (std::abs(urng.uniform() - 0.5) <= 0.05) {
        uniHit = t + 1;
        break;
      }
    }
    uniHits.push_back(uniHit);
  }
  auto median = [](std::vector<int> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? static_cast<double>(v[n / 2]) : (v[n / 2 - 1] + v[n / 2]) / 2.0;
  };
  const double tpeMedian = median(tpeHits);
  const double uniMedian = median(uniHits);
  require(within >= 18, fmt("best lambda within 0.1 on only %d/20 seeds", within));
  require(tpeMedian < uniMedian,
          fmt("median trials to eps: tpe %.1f !< uniform %.1f", tpeMedian, uniMedian));
  return fmt("within 0.1 on %d/20 seeds; median trials %.1f vs uniform %.1f", within, tpeMedian,
             uniMedian);
}

// ------------------------------------------------------- criterion 7 (shared)

std::vector<StudySpec> correlationSpecs(int epochs) {
  std::vector<StudySpec> specs;
  specs.push_back({"base", StudySpec::Kind::baseOnly, OpId::invert, {}, epochs});
  for (OpId op : {OpId::invert, OpId::solarize, OpId::rotate, OpId::color, OpId::sharpness,
                  OpId::cutout}) {
    specs.push_back({"single-" + opName(op), StudySpec::Kind::singleOp, op, {}, epochs});
  }
  const std::vector<std::pair<int, int>> grid = {{1, 4}, {1, 9}, {2, 7}, {2, 11}, {3, 9}};
  for (const auto& [nTau, lambda] : grid) {
    StudySpec spec;
    RandAugmentConfig cfg;
    cfg.nTau = nTau;
    cfg.lambdaDiscrete = lambda;
    cfg.opSubset.assign(kSearchableOps.begin(), kSearchableOps.end());
    spec.policy = makeRandaugmentPolicy(cfg);
    spec.name = spec.policy.name;
    spec.kind = StudySpec::Kind::policy;
    spec.epochs = epochs;
    specs.push_back(std::move(spec));
  }
  return specs;
}

std::string runCorrelationCriterion(const Dataset& data, const std::string& label) {
  CorrelationConfig cfg;
  cfg.moco.queueSize = 512;
  cfg.moco.batchSize = 64;
  cfg.moco.momentum = 0.99;
  cfg.moco.sgd.lr = 0.06;
  cfg.moco.sgd.schedule = {{12, 0.1}, {16, 0.1}};
  cfg.probe.epochs = 40;
  cfg.runJigsaw = false;
  cfg.workers = 2;
  const auto specs = correlationSpecs(20);
  const CorrelationResult result = runCorrelationStudy(specs, data, cfg, 2026);
  require(result.reports.size() >= 12, fmt("only %zu models trained", result.reports.size()));
  require(result.rhoRotation > 0.6,
          fmt("[%s] rotation/supervised rho %.4f <= 0.6", label.c_str(), result.rhoRotation));
  return fmt("[%s] %zu models, rotation/supervised rho %.4f > 0.6", label.c_str(),
             result.reports.size(), result.rhoRotation);
}

std::string cifarDirectory() {
  if (const char* env = std::getenv("CIFAR10_DIR")) return env;
  return "data/cifar-10-batches-bin";
}

std::string criterion7() {
  const std::string dir = cifarDirectory();
  if (!std::filesystem::exists(std::filesystem::path(dir) / "data_batch_1.bin")) {
    throw SkipCriterion{"CIFAR-10 binaries not found at \"" + dir +
                        "\" (set CIFAR10_DIR); the synthetic analog runs as criterion 7s"};
  }
  Dataset data = loadCifar10(dir);
  data = subsample(data, 5000, 99);
  return runCorrelationCriterion(data, "cifar10");
}

std::string criterion7s() {
  // Same scale as the CIFAR-10 criterion: 5,000 images, 32x32, 20 epochs,
  // 12 models. Nine orientation classes keep 90-degree rotations off the
  // class orientations and the supervised probe off its ceiling.
  const Dataset data = genSynthetic(9, 556, {32, 32}, 99);
  return runCorrelationCriterion(subsample(data, 5000, 99), "synthetic");
}

// ------------------------------------------------- criteria 8 and 9 (shared)

struct SearchFixture {
  Dataset data;
  MocoConfig moco;
  ProbeConfig probe;
  SearchConfig search;
  SelfAugmentSession session;
};

SearchFixture& searchFixture() {
  static SearchFixture fixture = [] {
    SearchFixture f;
    f.data = genSynthetic(5, 120, {16, 16}, 55);
    f.moco.queueSize = 64;
    f.moco.batchSize = 32;
    f.moco.momentum = 0.9;
    f.moco.epochs = 15;
    f.moco.encoder.channels = {8, 16, 32};
    f.moco.encoder.strides = {1, 2, 2};
    f.moco.encoder.projectionDim = 16;
    f.moco.sgd.lr = 0.02;
    f.probe.epochs = 30;
    f.search.K = 2;
    f.search.T = 2;
    f.search.B = 10;
    f.search.P = 3;
    f.search.lossKind = LossKind::minimax;
    f.search.workers = 2;
    f.session = prepareSession(f.data, f.search, f.moco, f.probe, 404);
    return f;
  }();
  return fixture;
}

std::string criterion8() {
  SearchFixture& f = searchFixture();

  // Two full same-seed runs of Algorithm 1 must agree byte for byte.
  const SelfAugmentResult runA = runSelfAugment(f.data, f.search, f.moco, f.probe, 404);
  const SelfAugmentResult runB = runSelfAugment(f.data, f.search, f.moco, f.probe, 404);
  const std::string docA = serializePolicy(runA.policy);
  require(docA == serializePolicy(runB.policy), "same-seed runs serialized differently");
  require(runA.policy.subPolicies.size() == 12,
          fmt("expected 12 sub-policies, got %zu", runA.policy.subPolicies.size()));
  validatePolicy(runA.policy);
  for (const auto& sp : runA.policy.subPolicies) {
    require(sp.transforms.size() == static_cast<std::size_t>(f.search.nTauSearch),
            "sub-policy arity mismatch");
  }

  // Directional quality: retrain with the searched minimax policy; its
  // rotation probe must not fall more than 0.02 below the base policy's.
  MocoConfig retrain = f.moco;
  retrain.epochs = 2 * f.moco.epochs;  // both arms get the fuller budget
  const auto baseAug = makeBaseAugmenter(runA.base);
  const auto baseRun = trainMoco(f.data, *baseAug, retrain, 808);
  const auto policyRun = trainMoco(f.data, runA.policy, retrain, 808);
  const double baseTop1 =
      trainProbe(baseRun.state.query, ProbeTask::rotation(), f.data, f.probe, 909).top1;
  const double policyTop1 =
      trainProbe(policyRun.state.query, ProbeTask::rotation(), f.data, f.probe, 909).top1;
  require(policyTop1 >= baseTop1 - 0.02,
          fmt("retrained minimax rotation top1 %.4f < base %.4f - 0.02", policyTop1, baseTop1));
  return fmt("12 sub-policies, byte-identical; retrained rotation top1 %.3f vs base %.3f",
             policyTop1, baseTop1);
}

std::string criterion9() {
  SearchFixture& f = searchFixture();
  std::map<LossKind, double> strength;
  for (LossKind kind : {LossKind::minInfo, LossKind::minimax, LossKind::maxInfo}) {
    SearchConfig cfg = f.search;
    cfg.lossKind = kind;
    const SearchPhaseResult phase = searchPolicies(f.session, f.data, cfg, 404);
    strength[kind] = expectedStrength(phase.policy);
  }
  const double weak = strength[LossKind::minInfo];
  const double mid = strength[LossKind::minimax];
  const double strong = strength[LossKind::maxInfo];
  require(weak < mid && mid < strong,
          fmt("mean lambda*p ordering violated: minInfo %.4f, minimax %.4f, maxInfo %.4f", weak,
              mid, strong));
  return fmt("mean lambda*p: minInfo %.4f < minimax %.4f < maxInfo %.4f", weak, mid, strong);
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    std::string id;
    std::string title;
    std::function<std::string()> run;
  };
  const std::vector<Criterion> criteria = {
      {"1", "transform oracle parity", criterion1},
      {"2", "gradient correctness", criterion2},
      {"3", "InfoNCE closed forms", criterion3},
      {"4", "momentum/queue mechanics", criterion4},
      {"5", "statistics (spearman, rv2)", criterion5},
      {"6", "TPE beats uniform search", criterion6},
      {"7", "desk-scale correlation (CIFAR-10)", criterion7},
      {"7s", "desk-scale correlation (synthetic analog)", criterion7s},
      {"8", "Algorithm 1 contract", criterion8},
      {"9", "loss-function strength ordering", criterion9},
  };

  std::vector<std::string> only;
  for (int i = 1; i < argc; ++i) only.emplace_back(argv[i]);

  int failures = 0;
  for (const auto& criterion : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), criterion.id) == only.end()) {
      continue;
    }
    const auto start = std::chrono::steady_clock::now();
    std::string verdict;
    std::string detail;
    try {
      detail = criterion.run();
      verdict = "[ PASS ]";
    } catch (const SkipCriterion& skip) {
      verdict = "[ SKIP ]";
      detail = skip.reason;
    } catch (const CheckFailure& failure) {
      verdict = "[ FAIL ]";
      detail = failure.message;
      ++failures;
    } catch (const std::exception& e) {
      verdict = "[ FAIL ]";
      detail = std::string("exception: ") + e.what();
      ++failures;
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %-4s %-44s %s (%.1fs)\n", verdict.c_str(), criterion.id.c_str(),
                criterion.title.c_str(), detail.c_str(), seconds);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
