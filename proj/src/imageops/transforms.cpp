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

#include "augsearch/imageops/transforms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

namespace augsearch {

namespace {

const std::map<OpId, std::string> kOpNames = {
    {OpId::shearX, "shearX"},
    {OpId::shearY, "shearY"},
    {OpId::translateX, "translateX"},
    {OpId::translateY, "translateY"},
    {OpId::rotate, "rotate"},
    {OpId::autoContrast, "autoContrast"},
    {OpId::invert, "invert"},
    {OpId::solarize, "solarize"},
    {OpId::posterize, "posterize"},
    {OpId::contrast, "contrast"},
    {OpId::color, "color"},
    {OpId::brightness, "brightness"},
    {OpId::sharpness, "sharpness"},
    {OpId::cutout, "cutout"},
    {OpId::equalize, "equalize"},
    {OpId::horizontalFlip, "horizontalFlip"},
    {OpId::randomResizeCrop, "randomResizeCrop"},
};

const std::array<MagnitudeRange, kNumSearchableOps> kRanges = {{
    {OpId::shearX, -0.3, 0.3},
    {OpId::shearY, -0.3, 0.3},
    {OpId::translateX, -0.45, 0.45},
    {OpId::translateY, -0.45, 0.45},
    {OpId::rotate, -30.0, 30.0},
    {OpId::autoContrast, 0.0, 1.0},
    {OpId::invert, 0.0, 1.0},
    {OpId::solarize, 0.0, 256.0},
    {OpId::posterize, 4.0, 8.0},
    {OpId::contrast, 0.1, 1.9},
    {OpId::color, 0.1, 1.9},
    {OpId::brightness, 0.1, 1.9},
    {OpId::sharpness, 0.1, 1.9},
    {OpId::cutout, 0.0, 0.2},
    {OpId::equalize, 0.0, 1.0},
}};

int quantize8(float v) {
  int q = static_cast<int>(std::lround(static_cast<double>(v) * 255.0));
  return std::clamp(q, 0, 255);
}

float clamp01(float v) { return std::clamp(v, 0.0f, 1.0f); }

/// Bilinear sample at continuous source coordinates; neighbors outside the
/// raster contribute the fill value.
float sampleBilinear(const Image& img, int c, double sx, double sy, float fill) {
  const int h = img.height();
  const int w = img.width();
  const int x0 = static_cast<int>(std::floor(sx));
  const int y0 = static_cast<int>(std::floor(sy));
  const double fx = sx - x0;
  const double fy = sy - y0;
  auto fetch = [&](int x, int y) -> double {
    if (x < 0 || x >= w || y < 0 || y >= h) return fill;
    return img.at(c, y, x);
  };
  const double top = fetch(x0, y0) * (1.0 - fx) + fetch(x0 + 1, y0) * fx;
  const double bot = fetch(x0, y0 + 1) * (1.0 - fx) + fetch(x0 + 1, y0 + 1) * fx;
  return static_cast<float>(top * (1.0 - fy) + bot * fy);
}

/// Warps by the inverse affine map (dst x,y) -> (src sx,sy):
///   sx = a*x + b*y + tx,  sy = c*x + d*y + ty.
Image affineWarp(const Image& img, double a, double b, double tx, double c, double d, double ty,
                 float fill) {
  const int h = img.height();
  const int w = img.width();
  Image out(h, w);
  for (int ch = 0; ch < 3; ++ch) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double sx = a * x + b * y + tx;
        const double sy = c * x + d * y + ty;
        out.at(ch, y, x) = clamp01(sampleBilinear(img, ch, sx, sy, fill));
      }
    }
  }
  return out;
}

double luminance(const Image& img, int y, int x) {
  return 0.299 * img.at(0, y, x) + 0.587 * img.at(1, y, x) + 0.114 * img.at(2, y, x);
}

Image autoContrastOp(const Image& img) {
  Image out = img;
  const int h = img.height();
  const int w = img.width();
  for (int c = 0; c < 3; ++c) {
    float lo = 1.0f;
    float hi = 0.0f;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        lo = std::min(lo, img.at(c, y, x));
        hi = std::max(hi, img.at(c, y, x));
      }
    }
    if (hi <= lo) continue;  // constant channel stays as is
    const float scale = hi - lo;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        out.at(c, y, x) = clamp01((img.at(c, y, x) - lo) / scale);
      }
    }
  }
  return out;
}

Image solarizeOp(const Image& img, int threshold) {
  Image out = img;
  for (std::size_t i = 0; i < img.pix.data.size(); ++i) {
    const float v = img.pix.data[i];
    if (quantize8(v) > threshold) out.pix.data[i] = 1.0f - v;
  }
  return out;
}

Image posterizeOp(const Image& img, int bits) {
  if (bits >= 8) return img;  // all bits kept, original float values preserved
  AUGS_REQUIRE(bits >= 1, "posterize: bits must be >= 1");
  const int mask = (0xff << (8 - bits)) & 0xff;
  Image out = img;
  for (std::size_t i = 0; i < img.pix.data.size(); ++i) {
    out.pix.data[i] = static_cast<float>(quantize8(img.pix.data[i]) & mask) / 255.0f;
  }
  return out;
}

/// Per-channel histogram equalization on the 8-bit quantization, using the
/// classic cumulative-LUT construction.
Image equalizeOp(const Image& img) {
  Image out = img;
  const int n = img.height() * img.width();
  for (int c = 0; c < 3; ++c) {
    std::array<int, 256> hist{};
    const float* plane = img.pix.data.data() + static_cast<std::size_t>(c) * n;
    for (int i = 0; i < n; ++i) hist[static_cast<std::size_t>(quantize8(plane[i]))]++;
    const int step = (n - hist[255]) / 255;
    if (step == 0) continue;
    std::array<int, 256> lut{};
    int acc = step / 2;
    for (int i = 0; i < 256; ++i) {
      lut[static_cast<std::size_t>(i)] = std::min(acc / step, 255);
      acc += hist[static_cast<std::size_t>(i)];
    }
    float* dst = out.pix.data.data() + static_cast<std::size_t>(c) * n;
    for (int i = 0; i < n; ++i) {
      dst[i] = static_cast<float>(lut[static_cast<std::size_t>(quantize8(plane[i]))]) / 255.0f;
    }
  }
  return out;
}

/// Blend out = degenerate + factor * (original - degenerate). factor == 1
/// returns the input unchanged.
Image contrastOp(const Image& img, double factor) {
  if (factor == 1.0) return img;
  const int h = img.height();
  const int w = img.width();
  double mean = 0.0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) mean += luminance(img, y, x);
  }
  mean /= static_cast<double>(h) * w;
  Image out = img;
  for (std::size_t i = 0; i < img.pix.data.size(); ++i) {
    out.pix.data[i] = clamp01(static_cast<float>(mean + factor * (img.pix.data[i] - mean)));
  }
  return out;
}

Image colorOp(const Image& img, double factor) {
  if (factor == 1.0) return img;
  const int h = img.height();
  const int w = img.width();
  Image out = img;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double grey = luminance(img, y, x);
      for (int c = 0; c < 3; ++c) {
        out.at(c, y, x) = clamp01(static_cast<float>(grey + factor * (img.at(c, y, x) - grey)));
      }
    }
  }
  return out;
}

Image brightnessOp(const Image& img, double factor) {
  if (factor == 1.0) return img;
  Image out = img;
  for (std::size_t i = 0; i < img.pix.data.size(); ++i) {
    out.pix.data[i] = clamp01(static_cast<float>(factor * img.pix.data[i]));
  }
  return out;
}

/// Blend against a 3x3 smoothing ([1,1,1;1,5,1;1,1,1]/13) of the image.
/// Border pixels keep their original value in the smoothed reference.
Image sharpnessOp(const Image& img, double factor) {
  if (factor == 1.0) return img;
  const int h = img.height();
  const int w = img.width();
  static constexpr double kSmooth[3][3] = {{1, 1, 1}, {1, 5, 1}, {1, 1, 1}};
  Image blurred = img;
  for (int c = 0; c < 3; ++c) {
    for (int y = 1; y + 1 < h; ++y) {
      for (int x = 1; x + 1 < w; ++x) {
        double acc = 0.0;
        for (int ky = 0; ky < 3; ++ky) {
          for (int kx = 0; kx < 3; ++kx) {
            acc += kSmooth[ky][kx] * img.at(c, y + ky - 1, x + kx - 1);
          }
        }
        blurred.at(c, y, x) = static_cast<float>(acc / 13.0);
      }
    }
  }
  Image out = img;
  for (std::size_t i = 0; i < img.pix.data.size(); ++i) {
    const double b = blurred.pix.data[i];
    out.pix.data[i] = clamp01(static_cast<float>(b + factor * (img.pix.data[i] - b)));
  }
  return out;
}

Image cutoutOp(const Image& img, double fraction, Rng& rng, float fill) {
  const int h = img.height();
  const int w = img.width();
  const int side = static_cast<int>(std::lround(fraction * std::min(h, w)));
  if (side <= 0) return img;
  // Uniform center; the square is clipped at the borders.
  const int cx = rng.uniformInt(w);
  const int cy = rng.uniformInt(h);
  const int x0 = std::max(0, cx - side / 2);
  const int y0 = std::max(0, cy - side / 2);
  const int x1 = std::min(w, x0 + side);
  const int y1 = std::min(h, y0 + side);
  Image out = img;
  for (int c = 0; c < 3; ++c) {
    for (int y = y0; y < y1; ++y) {
      for (int x = x0; x < x1; ++x) out.at(c, y, x) = fill;
    }
  }
  return out;
}

}  // namespace

const std::string& opName(OpId op) {
  auto it = kOpNames.find(op);
  AUGS_REQUIRE(it != kOpNames.end(), "opName: unknown op");
  return it->second;
}

OpId opFromName(const std::string& name) {
  for (const auto& [op, n] : kOpNames) {
    if (n == name) return op;
  }
  throw ParseError("unknown transformation op: \"" + name + "\"");
}

const MagnitudeRange& magnitudeRange(OpId op) {
  for (const auto& r : kRanges) {
    if (r.opId == op) return r;
  }
  throw ContractError("magnitudeRange: op \"" + opName(op) + "\" has no magnitude scale");
}

double magnitudeToParam(OpId op, double lambda) {
  AUGS_REQUIRE(lambda >= 0.0 && lambda <= 1.0, "magnitudeToParam: lambda outside [0,1]");
  const MagnitudeRange& r = magnitudeRange(op);
  const double value = r.min + lambda * (r.max - r.min);
  if (isIntegerParam(op)) return static_cast<double>(std::lround(value));
  return value;
}

Image applyTransform(const Image& img, OpId op, double param, Rng& rng,
                     const TransformOptions& opts) {
  AUGS_REQUIRE(img.pix.allFinite(), "applyTransform: input image has non-finite pixels");
  const int h = img.height();
  const int w = img.width();
  switch (op) {
    case OpId::shearX:
      return affineWarp(img, 1.0, param, 0.0, 0.0, 1.0, 0.0, opts.geometricFill);
    case OpId::shearY:
      return affineWarp(img, 1.0, 0.0, 0.0, param, 1.0, 0.0, opts.geometricFill);
    case OpId::translateX:
      return affineWarp(img, 1.0, 0.0, param * w, 0.0, 1.0, 0.0, opts.geometricFill);
    case OpId::translateY:
      return affineWarp(img, 1.0, 0.0, 0.0, 0.0, 1.0, param * h, opts.geometricFill);
    case OpId::rotate: {
      const double rad = param * 3.14159265358979323846 / 180.0;
      const double c = std::cos(rad);
      const double s = std::sin(rad);
      const double cx = (w - 1) / 2.0;
      const double cy = (h - 1) / 2.0;
      // Inverse map of a counterclockwise content rotation about the center.
      return affineWarp(img, c, -s, cx - c * cx + s * cy, s, c, cy - s * cx - c * cy,
                        opts.geometricFill);
    }
    case OpId::autoContrast:
      return autoContrastOp(img);
    case OpId::invert: {
      Image out = img;
      for (auto& v : out.pix.data) v = 1.0f - v;
      return out;
    }
    case OpId::solarize:
      return solarizeOp(img, static_cast<int>(std::lround(param)));
    case OpId::posterize:
      return posterizeOp(img, static_cast<int>(std::lround(param)));
    case OpId::contrast:
      return contrastOp(img, param);
    case OpId::color:
      return colorOp(img, param);
    case OpId::brightness:
      return brightnessOp(img, param);
    case OpId::sharpness:
      return sharpnessOp(img, param);
    case OpId::cutout:
      return cutoutOp(img, param, rng, opts.cutoutFill);
    case OpId::equalize:
      return equalizeOp(img);
    case OpId::horizontalFlip:
      return horizontalFlip(img);
    case OpId::randomResizeCrop:
      throw ContractError("applyTransform: randomResizeCrop requires randomResizeCrop()");
  }
  throw ContractError("applyTransform: unknown op");
}

Image randomResizeCrop(const Image& img, Rng& rng, std::pair<double, double> scaleRange,
                       std::pair<int, int> outSize) {
  AUGS_REQUIRE(scaleRange.first > 0.0 && scaleRange.first <= scaleRange.second &&
                   scaleRange.second <= 1.0,
               "randomResizeCrop: scale range must satisfy 0 < min <= max <= 1");
  AUGS_REQUIRE(outSize.first > 0 && outSize.second > 0, "randomResizeCrop: bad output size");
  const int h = img.height();
  const int w = img.width();
  const double area = rng.uniform(scaleRange.first, scaleRange.second);
  const double side = std::sqrt(area);
  int cropH = std::max(1, static_cast<int>(std::lround(side * h)));
  int cropW = std::max(1, static_cast<int>(std::lround(side * w)));
  cropH = std::min(cropH, h);
  cropW = std::min(cropW, w);
  const int y0 = (h == cropH) ? 0 : rng.uniformInt(h - cropH + 1);
  const int x0 = (w == cropW) ? 0 : rng.uniformInt(w - cropW + 1);

  const int outH = outSize.first;
  const int outW = outSize.second;
  Image out(outH, outW);
  const double scaleY = static_cast<double>(cropH) / outH;
  const double scaleX = static_cast<double>(cropW) / outW;
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < outH; ++y) {
      // Half-pixel-center mapping: equal sizes resample to an exact copy.
      const double syLocal = (y + 0.5) * scaleY - 0.5;
      const double sy = std::clamp(syLocal, 0.0, cropH - 1.0) + y0;
      for (int x = 0; x < outW; ++x) {
        const double sxLocal = (x + 0.5) * scaleX - 0.5;
        const double sx = std::clamp(sxLocal, 0.0, cropW - 1.0) + x0;
        out.at(c, y, x) = clamp01(sampleBilinear(img, c, sx, sy, 0.0f));
      }
    }
  }
  return out;
}

Image horizontalFlip(const Image& img) {
  const int h = img.height();
  const int w = img.width();
  Image out(h, w);
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) out.at(c, y, x) = img.at(c, y, w - 1 - x);
    }
  }
  return out;
}

}  // namespace augsearch
