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

#include "augsearch/search/tpe.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace augsearch {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kLog2Pi = 1.8378770664093454836;

double normalCdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }

/// Acklam's rational approximation of the standard normal quantile,
/// accurate to ~1e-9 over (0, 1).
double normalQuantile(double p) {
  AUGS_REQUIRE(p > 0.0 && p < 1.0, "normalQuantile: p outside (0,1)");
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double logSumExp(const std::vector<double>& v) {
  const double mx = *std::max_element(v.begin(), v.end());
  double acc = 0.0;
  for (double x : v) acc += std::exp(x - mx);
  return mx + std::log(acc);
}

}  // namespace

/// Factorized density over the slots, fit to one side of the split. A
/// uniform prior kernel with unit weight keeps every region reachable and
/// tempers over-exploitation of the current mode.
struct TpeSampler::Density {
  const std::vector<SearchSlot>* space = nullptr;
  const TpeConfig* cfg = nullptr;
  std::vector<const TpeTrial*> points;
  std::vector<std::vector<double>> catProbs;  // per slot, smoothed frequencies
  std::vector<double> bandwidth;              // per slot (continuous only)
  double priorWeight = 1.0;

  void fit() {
    const std::size_t d = space->size();
    catProbs.assign(d, {});
    bandwidth.assign(d, 0.0);
    const double n = static_cast<double>(points.size());
    // Scott's rule exponent uses the full slot dimensionality.
    const double scott = std::pow(n, -1.0 / (4.0 + static_cast<double>(d)));
    for (std::size_t j = 0; j < d; ++j) {
      const SearchSlot& slot = (*space)[j];
      if (slot.kind == SearchSlot::Kind::categorical) {
        std::vector<double> counts(static_cast<std::size_t>(slot.categories),
                                   cfg->categoricalSmoothing);
        for (const TpeTrial* t : points) {
          const int c = static_cast<int>(std::lround(t->x[j]));
          AUGS_REQUIRE(c >= 0 && c < slot.categories, "TpeSampler: categorical value out of range");
          counts[static_cast<std::size_t>(c)] += 1.0;
        }
        const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
        for (auto& c : counts) c /= total;
        catProbs[j] = std::move(counts);
      } else {
        double mean = 0.0;
        for (const TpeTrial* t : points) mean += t->x[j];
        mean /= n;
        double var = 0.0;
        for (const TpeTrial* t : points) {
          const double diff = t->x[j] - mean;
          var += diff * diff;
        }
        var /= n;
        const double range = slot.hi - slot.lo;
        const double sigma = std::max(std::sqrt(var), cfg->bandwidthFloor * range);
        bandwidth[j] = std::max(sigma * scott, 1e-6 * range);
      }
    }
  }

  double logUniformKernel() const {
    double acc = 0.0;
    for (const SearchSlot& slot : *space) {
      if (slot.kind == SearchSlot::Kind::continuous) acc -= std::log(slot.hi - slot.lo);
    }
    return acc;
  }

  /// Log density at x: categorical slots factorize; continuous slots form a
  /// mixture of truncated Gaussian product kernels over the fit points plus
  /// the uniform prior kernel.
  double logPdf(const std::vector<double>& x) const {
    double catLog = 0.0;
    for (std::size_t j = 0; j < space->size(); ++j) {
      if ((*space)[j].kind == SearchSlot::Kind::categorical) {
        catLog += std::log(catProbs[j][static_cast<std::size_t>(std::lround(x[j]))]);
      }
    }
    std::vector<double> kernelLogs;
    kernelLogs.reserve(points.size() + 1);
    for (const TpeTrial* t : points) {
      double lk = 0.0;
      for (std::size_t j = 0; j < space->size(); ++j) {
        const SearchSlot& slot = (*space)[j];
        if (slot.kind != SearchSlot::Kind::continuous) continue;
        const double h = bandwidth[j];
        const double z = (x[j] - t->x[j]) / h;
        const double za = (slot.lo - t->x[j]) / h;
        const double zb = (slot.hi - t->x[j]) / h;
        const double mass = normalCdf(zb) - normalCdf(za);
        lk += -0.5 * (kLog2Pi + z * z) - std::log(h) - std::log(std::max(mass, 1e-12));
      }
      kernelLogs.push_back(lk);
    }
    kernelLogs.push_back(logUniformKernel() + std::log(priorWeight));
    return catLog + logSumExp(kernelLogs) -
           std::log(static_cast<double>(points.size()) + priorWeight);
  }

  /// Draws from the density: categorical slots from their smoothed
  /// frequencies, continuous slots from a truncated Gaussian around one
  /// chosen fit point (or uniformly, when the prior kernel is drawn).
  std::vector<double> sample(Rng& rng) const {
    std::vector<double> x(space->size(), 0.0);
    const double total = static_cast<double>(points.size()) + priorWeight;
    const std::size_t anchorIdx =
        static_cast<std::size_t>(std::min<double>(rng.uniform() * total,
                                                  static_cast<double>(points.size())));
    const bool fromPrior = anchorIdx >= points.size();
    const TpeTrial* anchor = fromPrior ? nullptr : points[anchorIdx];
    for (std::size_t j = 0; j < space->size(); ++j) {
      const SearchSlot& slot = (*space)[j];
      if (slot.kind == SearchSlot::Kind::categorical) {
        const double u = rng.uniform();
        double acc = 0.0;
        int pick = slot.categories - 1;
        for (int c = 0; c < slot.categories; ++c) {
          acc += catProbs[j][static_cast<std::size_t>(c)];
          if (u < acc) {
            pick = c;
            break;
          }
        }
        x[j] = pick;
      } else if (fromPrior) {
        x[j] = rng.uniform(slot.lo, slot.hi);
      } else {
        const double h = bandwidth[j];
        const double lowCdf = normalCdf((slot.lo - anchor->x[j]) / h);
        const double highCdf = normalCdf((slot.hi - anchor->x[j]) / h);
        const double u = lowCdf + (highCdf - lowCdf) * rng.uniform();
        const double z = normalQuantile(std::clamp(u, 1e-12, 1.0 - 1e-12));
        x[j] = std::clamp(anchor->x[j] + h * z, slot.lo, slot.hi);
      }
    }
    return x;
  }
};

TpeSampler::TpeSampler(std::vector<SearchSlot> space, TpeConfig cfg)
    : space_(std::move(space)), cfg_(cfg) {
  AUGS_REQUIRE(!space_.empty(), "TpeSampler: empty search space");
  AUGS_REQUIRE(cfg_.gamma > 0.0 && cfg_.gamma < 1.0, "TpeSampler: gamma outside (0,1)");
  AUGS_REQUIRE(cfg_.nCandidates >= 1, "TpeSampler: need at least one candidate");
  for (const auto& slot : space_) {
    if (slot.kind == SearchSlot::Kind::categorical) {
      AUGS_REQUIRE(slot.categories >= 1, "TpeSampler: categorical slot without categories");
    } else {
      AUGS_REQUIRE(slot.hi > slot.lo, "TpeSampler: continuous slot with empty range");
    }
  }
}

std::vector<double> TpeSampler::sampleUniform(Rng& rng) const {
  std::vector<double> x(space_.size(), 0.0);
  for (std::size_t j = 0; j < space_.size(); ++j) {
    const SearchSlot& slot = space_[j];
    if (slot.kind == SearchSlot::Kind::categorical) {
      x[j] = rng.uniformInt(slot.categories);
    } else {
      x[j] = rng.uniform(slot.lo, slot.hi);
    }
  }
  return x;
}

std::vector<double> TpeSampler::suggest(const std::vector<TpeTrial>& history, Rng& rng) const {
  if (static_cast<int>(history.size()) < cfg_.nStartup) return sampleUniform(rng);

  // Split at the gamma-quantile threshold.
  std::vector<std::size_t> order(history.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return history[a].score < history[b].score;
  });
  const int nGood = std::max(
      1, static_cast<int>(std::ceil(cfg_.gamma * static_cast<double>(history.size()))));
  Density good{&space_, &cfg_, {}, {}, {}};
  Density bad{&space_, &cfg_, {}, {}, {}};
  for (std::size_t i = 0; i < order.size(); ++i) {
    (static_cast<int>(i) < nGood ? good : bad).points.push_back(&history[order[i]]);
  }
  if (bad.points.empty()) return sampleUniform(rng);
  good.fit();
  bad.fit();

  std::vector<double> best;
  double bestRatio = -std::numeric_limits<double>::infinity();
  for (int c = 0; c < cfg_.nCandidates; ++c) {
    std::vector<double> x = good.sample(rng);
    const double ratio = good.logPdf(x) - bad.logPdf(x);
    if (ratio > bestRatio) {
      bestRatio = ratio;
      best = std::move(x);
    }
  }
  return best;
}

}  // namespace augsearch
