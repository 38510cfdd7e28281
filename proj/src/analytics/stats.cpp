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

#include "augsearch/analytics/stats.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace augsearch {

namespace {

/// Average ranks (1-based); tied values share the mean of their positions.
std::vector<double> averageRanks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw ContractError("spearman: correlation undefined for a constant input vector");
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  AUGS_REQUIRE(x.size() == y.size(), "spearman: input lengths differ");
  AUGS_REQUIRE(x.size() >= 3, "spearman: need at least 3 points");
  for (double v : x) AUGS_REQUIRE(std::isfinite(v), "spearman: non-finite input");
  for (double v : y) AUGS_REQUIRE(std::isfinite(v), "spearman: non-finite input");
  return pearson(averageRanks(x), averageRanks(y));
}

double rv2(const Tensor& x, const Tensor& y) {
  AUGS_REQUIRE(x.rank() == 2 && y.rank() == 2, "rv2: expected [N,D] matrices");
  AUGS_REQUIRE(x.dim(0) == y.dim(0), "rv2: row counts differ");
  const int n = x.dim(0);
  AUGS_REQUIRE(n >= 2, "rv2: need at least 2 rows");

  auto gramNoDiag = [n](const Tensor& m) {
    Eigen::MatrixXd a(n, m.dim(1));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < m.dim(1); ++j) a(i, j) = m.at({i, j});
    }
    Eigen::MatrixXd g = a * a.transpose();
    g.diagonal().setZero();
    return g;
  };
  const Eigen::MatrixXd gx = gramNoDiag(x);
  const Eigen::MatrixXd gy = gramNoDiag(y);
  const double num = (gx.array() * gy.array()).sum();
  const double nx = (gx.array() * gx.array()).sum();
  const double ny = (gy.array() * gy.array()).sum();
  if (nx == 0.0 || ny == 0.0) {
    throw ContractError("rv2: similarity undefined, off-diagonal Gram norm is zero");
  }
  return num / std::sqrt(nx * ny);
}

}  // namespace augsearch
