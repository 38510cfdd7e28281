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

#ifndef AUGSEARCH_NN_LAYERS_HPP
#define AUGSEARCH_NN_LAYERS_HPP

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <vector>

#include "augsearch/core/rng.hpp"
#include "augsearch/core/tensor.hpp"

namespace augsearch {

/// Named handle onto one trainable tensor and its gradient accumulator.
template <typename S>
struct ParamView {
  std::string name;
  TensorT<S>* value = nullptr;
  TensorT<S>* grad = nullptr;
};

template <typename S>
using MatX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <typename S>
using RowMajorMap = Eigen::Map<Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
template <typename S>
using ConstRowMajorMap =
    Eigen::Map<const Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

/// 3x3-style convolution implemented as im2col plus one GEMM per batch.
template <typename S>
class Conv2d {
public:
  Conv2d() = default;
  Conv2d(int inC, int outC, int kernel, int stride, int pad)
      : inC_(inC), outC_(outC), k_(kernel), stride_(stride), pad_(pad) {
    weight_ = TensorT<S>({outC, inC, kernel, kernel});
    bias_ = TensorT<S>({outC});
    wGrad_ = TensorT<S>(weight_.shape);
    bGrad_ = TensorT<S>(bias_.shape);
  }

  void init(Rng& rng) {
    const double stddev = std::sqrt(2.0 / (inC_ * k_ * k_));
    for (auto& v : weight_.data) v = static_cast<S>(rng.normal() * stddev);
    bias_.fill(S(0));
  }

  TensorT<S> forward(const TensorT<S>& x) {
    AUGS_REQUIRE(x.rank() == 4 && x.dim(1) == inC_,
                 "Conv2d: input shape mismatch " + shapeToString(x.shape));
    n_ = x.dim(0);
    h_ = x.dim(2);
    w_ = x.dim(3);
    ho_ = (h_ + 2 * pad_ - k_) / stride_ + 1;
    wo_ = (w_ + 2 * pad_ - k_) / stride_ + 1;
    AUGS_REQUIRE(ho_ >= 1 && wo_ >= 1, "Conv2d: output collapses to zero size");
    const int ckk = inC_ * k_ * k_;
    const long cols = static_cast<long>(n_) * ho_ * wo_;
    cols_.resize(ckk, cols);
    im2col(x);

    ConstRowMajorMap<S> w2(weight_.data.data(), outC_, ckk);
    MatX<S> y2 = w2 * cols_;

    TensorT<S> y({n_, outC_, ho_, wo_});
    for (int n = 0; n < n_; ++n) {
      for (int oc = 0; oc < outC_; ++oc) {
        for (int oy = 0; oy < ho_; ++oy) {
          for (int ox = 0; ox < wo_; ++ox) {
            const long col = (static_cast<long>(n) * ho_ + oy) * wo_ + ox;
            y.data[y.offset({n, oc, oy, ox})] = y2(oc, col) + bias_.data[static_cast<std::size_t>(oc)];
          }
        }
      }
    }
    return y;
  }

  TensorT<S> backward(const TensorT<S>& dy) {
    const int ckk = inC_ * k_ * k_;
    const long cols = static_cast<long>(n_) * ho_ * wo_;
    MatX<S> dy2(outC_, cols);
    for (int n = 0; n < n_; ++n) {
      for (int oc = 0; oc < outC_; ++oc) {
        for (int oy = 0; oy < ho_; ++oy) {
          for (int ox = 0; ox < wo_; ++ox) {
            const long col = (static_cast<long>(n) * ho_ + oy) * wo_ + ox;
            dy2(oc, col) = dy.data[dy.offset({n, oc, oy, ox})];
          }
        }
      }
    }
    RowMajorMap<S> wg(wGrad_.data.data(), outC_, ckk);
    wg.noalias() += dy2 * cols_.transpose();
    for (int oc = 0; oc < outC_; ++oc) {
      bGrad_.data[static_cast<std::size_t>(oc)] += dy2.row(oc).sum();
    }
    ConstRowMajorMap<S> w2(weight_.data.data(), outC_, ckk);
    MatX<S> dcols = w2.transpose() * dy2;
    return col2im(dcols);
  }

  void collectParams(const std::string& prefix, std::vector<ParamView<S>>& out) {
    out.push_back({prefix + "/weight", &weight_, &wGrad_});
    out.push_back({prefix + "/bias", &bias_, &bGrad_});
  }

  int outChannels() const { return outC_; }

private:
  void im2col(const TensorT<S>& x) {
    for (int n = 0; n < n_; ++n) {
      for (int oy = 0; oy < ho_; ++oy) {
        for (int ox = 0; ox < wo_; ++ox) {
          const long col = (static_cast<long>(n) * ho_ + oy) * wo_ + ox;
          S* dst = cols_.data() + col * (inC_ * k_ * k_);
          for (int c = 0; c < inC_; ++c) {
            for (int ky = 0; ky < k_; ++ky) {
              const int iy = oy * stride_ + ky - pad_;
              for (int kx = 0; kx < k_; ++kx) {
                const int ix = ox * stride_ + kx - pad_;
                S v = S(0);
                if (iy >= 0 && iy < h_ && ix >= 0 && ix < w_) {
                  v = x.data[x.offset({n, c, iy, ix})];
                }
                dst[(c * k_ + ky) * k_ + kx] = v;
              }
            }
          }
        }
      }
    }
  }

  TensorT<S> col2im(const MatX<S>& dcols) const {
    TensorT<S> dx({n_, inC_, h_, w_});
    for (int n = 0; n < n_; ++n) {
      for (int oy = 0; oy < ho_; ++oy) {
        for (int ox = 0; ox < wo_; ++ox) {
          const long col = (static_cast<long>(n) * ho_ + oy) * wo_ + ox;
          for (int c = 0; c < inC_; ++c) {
            for (int ky = 0; ky < k_; ++ky) {
              const int iy = oy * stride_ + ky - pad_;
              if (iy < 0 || iy >= h_) continue;
              for (int kx = 0; kx < k_; ++kx) {
                const int ix = ox * stride_ + kx - pad_;
                if (ix < 0 || ix >= w_) continue;
                dx.data[dx.offset({n, c, iy, ix})] += dcols((c * k_ + ky) * k_ + kx, col);
              }
            }
          }
        }
      }
    }
    return dx;
  }

  int inC_ = 0, outC_ = 0, k_ = 3, stride_ = 1, pad_ = 1;
  int n_ = 0, h_ = 0, w_ = 0, ho_ = 0, wo_ = 0;
  TensorT<S> weight_, bias_, wGrad_, bGrad_;
  MatX<S> cols_;
};

/// Per-channel batch normalization over (N, H, W). Normalization always uses
/// the statistics of the batch at hand, in training and in evaluation, so an
/// encoder's state is exactly its trainable parameters (no running buffers).
template <typename S>
class BatchNorm2d {
public:
  BatchNorm2d() = default;
  explicit BatchNorm2d(int channels) : c_(channels) {
    gamma_ = TensorT<S>({channels});
    beta_ = TensorT<S>({channels});
    gGrad_ = TensorT<S>({channels});
    bGrad_ = TensorT<S>({channels});
    gamma_.fill(S(1));
  }

  TensorT<S> forward(const TensorT<S>& x) {
    AUGS_REQUIRE(x.rank() == 4 && x.dim(1) == c_, "BatchNorm2d: input shape mismatch");
    n_ = x.dim(0);
    h_ = x.dim(2);
    w_ = x.dim(3);
    const long m = static_cast<long>(n_) * h_ * w_;
    xhat_ = TensorT<S>(x.shape);
    invstd_.assign(static_cast<std::size_t>(c_), S(0));
    TensorT<S> y(x.shape);
    for (int c = 0; c < c_; ++c) {
      double mean = 0.0;
      for (int n = 0; n < n_; ++n) {
        const S* p = x.data.data() + x.offset({n, c, 0, 0});
        for (long i = 0; i < static_cast<long>(h_) * w_; ++i) mean += p[i];
      }
      mean /= static_cast<double>(m);
      double var = 0.0;
      for (int n = 0; n < n_; ++n) {
        const S* p = x.data.data() + x.offset({n, c, 0, 0});
        for (long i = 0; i < static_cast<long>(h_) * w_; ++i) {
          const double d = p[i] - mean;
          var += d * d;
        }
      }
      var /= static_cast<double>(m);
      const S inv = static_cast<S>(1.0 / std::sqrt(var + kEps));
      invstd_[static_cast<std::size_t>(c)] = inv;
      const S g = gamma_.data[static_cast<std::size_t>(c)];
      const S b = beta_.data[static_cast<std::size_t>(c)];
      for (int n = 0; n < n_; ++n) {
        const S* p = x.data.data() + x.offset({n, c, 0, 0});
        S* xh = xhat_.data.data() + xhat_.offset({n, c, 0, 0});
        S* yp = y.data.data() + y.offset({n, c, 0, 0});
        for (long i = 0; i < static_cast<long>(h_) * w_; ++i) {
          xh[i] = static_cast<S>((p[i] - mean) * inv);
          yp[i] = g * xh[i] + b;
        }
      }
    }
    return y;
  }

  TensorT<S> backward(const TensorT<S>& dy) {
    const long m = static_cast<long>(n_) * h_ * w_;
    TensorT<S> dx(dy.shape);
    for (int c = 0; c < c_; ++c) {
      double sumDy = 0.0;
      double sumDyXhat = 0.0;
      for (int n = 0; n < n_; ++n) {
        const S* dp = dy.data.data() + dy.offset({n, c, 0, 0});
        const S* xh = xhat_.data.data() + xhat_.offset({n, c, 0, 0});
        for (long i = 0; i < static_cast<long>(h_) * w_; ++i) {
          sumDy += dp[i];
          sumDyXhat += static_cast<double>(dp[i]) * xh[i];
        }
      }
      gGrad_.data[static_cast<std::size_t>(c)] += static_cast<S>(sumDyXhat);
      bGrad_.data[static_cast<std::size_t>(c)] += static_cast<S>(sumDy);
      const double g = gamma_.data[static_cast<std::size_t>(c)];
      const double inv = invstd_[static_cast<std::size_t>(c)];
      const double scale = g * inv / static_cast<double>(m);
      for (int n = 0; n < n_; ++n) {
        const S* dp = dy.data.data() + dy.offset({n, c, 0, 0});
        const S* xh = xhat_.data.data() + xhat_.offset({n, c, 0, 0});
        S* dxp = dx.data.data() + dx.offset({n, c, 0, 0});
        for (long i = 0; i < static_cast<long>(h_) * w_; ++i) {
          dxp[i] = static_cast<S>(scale * (m * dp[i] - sumDy - xh[i] * sumDyXhat));
        }
      }
    }
    return dx;
  }

  void collectParams(const std::string& prefix, std::vector<ParamView<S>>& out) {
    out.push_back({prefix + "/gamma", &gamma_, &gGrad_});
    out.push_back({prefix + "/beta", &beta_, &bGrad_});
  }

private:
  static constexpr double kEps = 1e-5;
  int c_ = 0, n_ = 0, h_ = 0, w_ = 0;
  TensorT<S> gamma_, beta_, gGrad_, bGrad_;
  TensorT<S> xhat_;
  std::vector<S> invstd_;
};

template <typename S>
class ReLU {
public:
  TensorT<S> forward(const TensorT<S>& x) {
    mask_.assign(x.data.size(), 0);
    TensorT<S> y(x.shape);
    for (std::size_t i = 0; i < x.data.size(); ++i) {
      if (x.data[i] > S(0)) {
        mask_[i] = 1;
        y.data[i] = x.data[i];
      }
    }
    return y;
  }

  TensorT<S> backward(const TensorT<S>& dy) {
    TensorT<S> dx(dy.shape);
    for (std::size_t i = 0; i < dy.data.size(); ++i) {
      dx.data[i] = mask_[i] ? dy.data[i] : S(0);
    }
    return dx;
  }

private:
  std::vector<unsigned char> mask_;
};

template <typename S>
class GlobalAvgPool {
public:
  TensorT<S> forward(const TensorT<S>& x) {
    AUGS_REQUIRE(x.rank() == 4, "GlobalAvgPool: expected [N,C,H,W]");
    n_ = x.dim(0);
    c_ = x.dim(1);
    h_ = x.dim(2);
    w_ = x.dim(3);
    TensorT<S> y({n_, c_});
    const double inv = 1.0 / (static_cast<double>(h_) * w_);
    for (int n = 0; n < n_; ++n) {
      for (int c = 0; c < c_; ++c) {
        double acc = 0.0;
        const S* p = x.data.data() + x.offset({n, c, 0, 0});
        for (long i = 0; i < static_cast<long>(h_) * w_; ++i) acc += p[i];
        y.data[y.offset({n, c})] = static_cast<S>(acc * inv);
      }
    }
    return y;
  }

  TensorT<S> backward(const TensorT<S>& dy) {
    TensorT<S> dx({n_, c_, h_, w_});
    const double inv = 1.0 / (static_cast<double>(h_) * w_);
    for (int n = 0; n < n_; ++n) {
      for (int c = 0; c < c_; ++c) {
        const S g = static_cast<S>(dy.data[dy.offset({n, c})] * inv);
        S* p = dx.data.data() + dx.offset({n, c, 0, 0});
        for (long i = 0; i < static_cast<long>(h_) * w_; ++i) p[i] = g;
      }
    }
    return dx;
  }

private:
  int n_ = 0, c_ = 0, h_ = 0, w_ = 0;
};

/// Affine map y = x W^T + b for row features.
template <typename S>
class Linear {
public:
  Linear() = default;
  Linear(int inDim, int outDim) : in_(inDim), out_(outDim) {
    weight_ = TensorT<S>({outDim, inDim});
    bias_ = TensorT<S>({outDim});
    wGrad_ = TensorT<S>(weight_.shape);
    bGrad_ = TensorT<S>(bias_.shape);
  }

  void init(Rng& rng) {
    const double stddev = std::sqrt(2.0 / in_);
    for (auto& v : weight_.data) v = static_cast<S>(rng.normal() * stddev);
    bias_.fill(S(0));
  }

  TensorT<S> forward(const TensorT<S>& x) {
    AUGS_REQUIRE(x.rank() == 2 && x.dim(1) == in_, "Linear: input shape mismatch");
    x_ = x;
    const int n = x.dim(0);
    TensorT<S> y({n, out_});
    ConstRowMajorMap<S> xm(x.data.data(), n, in_);
    ConstRowMajorMap<S> wm(weight_.data.data(), out_, in_);
    RowMajorMap<S> ym(y.data.data(), n, out_);
    ym.noalias() = xm * wm.transpose();
    for (int i = 0; i < n; ++i) {
      for (int o = 0; o < out_; ++o) y.data[y.offset({i, o})] += bias_.data[static_cast<std::size_t>(o)];
    }
    return y;
  }

  TensorT<S> backward(const TensorT<S>& dy) {
    const int n = dy.dim(0);
    ConstRowMajorMap<S> dym(dy.data.data(), n, out_);
    ConstRowMajorMap<S> xm(x_.data.data(), n, in_);
    RowMajorMap<S> wg(wGrad_.data.data(), out_, in_);
    wg.noalias() += dym.transpose() * xm;
    for (int o = 0; o < out_; ++o) bGrad_.data[static_cast<std::size_t>(o)] += dym.col(o).sum();
    TensorT<S> dx({n, in_});
    ConstRowMajorMap<S> wm(weight_.data.data(), out_, in_);
    RowMajorMap<S> dxm(dx.data.data(), n, in_);
    dxm.noalias() = dym * wm;
    return dx;
  }

  void collectParams(const std::string& prefix, std::vector<ParamView<S>>& out) {
    out.push_back({prefix + "/weight", &weight_, &wGrad_});
    out.push_back({prefix + "/bias", &bias_, &bGrad_});
  }

  const TensorT<S>& weight() const { return weight_; }
  const TensorT<S>& bias() const { return bias_; }
  TensorT<S>& weight() { return weight_; }
  TensorT<S>& bias() { return bias_; }
  int inDim() const { return in_; }
  int outDim() const { return out_; }

private:
  int in_ = 0, out_ = 0;
  TensorT<S> weight_, bias_, wGrad_, bGrad_;
  TensorT<S> x_;
};

/// Row-wise L2 normalization with a small norm floor.
template <typename S>
class L2NormalizeRows {
public:
  TensorT<S> forward(const TensorT<S>& x) {
    AUGS_REQUIRE(x.rank() == 2, "L2NormalizeRows: expected [N,d]");
    const int n = x.dim(0);
    const int d = x.dim(1);
    y_ = TensorT<S>(x.shape);
    norms_.assign(static_cast<std::size_t>(n), S(0));
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      const S* p = x.data.data() + x.offset({i, 0});
      for (int j = 0; j < d; ++j) acc += static_cast<double>(p[j]) * p[j];
      const double norm = std::max(std::sqrt(acc), 1e-12);
      norms_[static_cast<std::size_t>(i)] = static_cast<S>(norm);
      S* yp = y_.data.data() + y_.offset({i, 0});
      for (int j = 0; j < d; ++j) yp[j] = static_cast<S>(p[j] / norm);
    }
    return y_;
  }

  TensorT<S> backward(const TensorT<S>& dy) {
    const int n = dy.dim(0);
    const int d = dy.dim(1);
    TensorT<S> dx(dy.shape);
    for (int i = 0; i < n; ++i) {
      const S* yp = y_.data.data() + y_.offset({i, 0});
      const S* dp = dy.data.data() + dy.offset({i, 0});
      double dot = 0.0;
      for (int j = 0; j < d; ++j) dot += static_cast<double>(yp[j]) * dp[j];
      S* dxp = dx.data.data() + dx.offset({i, 0});
      const double inv = 1.0 / norms_[static_cast<std::size_t>(i)];
      for (int j = 0; j < d; ++j) {
        dxp[j] = static_cast<S>((dp[j] - yp[j] * dot) * inv);
      }
    }
    return dx;
  }

private:
  TensorT<S> y_;
  std::vector<S> norms_;
};

}  // namespace augsearch

#endif  // AUGSEARCH_NN_LAYERS_HPP
