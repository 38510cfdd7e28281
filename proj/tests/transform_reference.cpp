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

#include "transform_reference.hpp"

#include <algorithm>
#include <cmath>

namespace augsearch::testref {

namespace {

constexpr double kPi = 3.14159265358979323846;

int toByte(float v) {
  long q = std::lround(static_cast<double>(v) * 255.0);
  if (q < 0) q = 0;
  if (q > 255) q = 255;
  return static_cast<int>(q);
}

float clip(double v) {
  if (v < 0.0) return 0.0f;
  if (v > 1.0) return 1.0f;
  return static_cast<float>(v);
}

// Bilinear lookup at (sx, sy); any neighbor outside the raster contributes
// the neutral grey fill 0.5.
float lookup(const Image& src, int c, double sx, double sy) {
  const int x0 = static_cast<int>(std::floor(sx));
  const int y0 = static_cast<int>(std::floor(sy));
  const double fx = sx - x0;
  const double fy = sy - y0;
  double value = 0.0;
  for (int dy = 0; dy <= 1; ++dy) {
    for (int dx = 0; dx <= 1; ++dx) {
      const int x = x0 + dx;
      const int y = y0 + dy;
      double p = 0.5;
      if (x >= 0 && x < src.width() && y >= 0 && y < src.height()) p = src.at(c, y, x);
      value += p * (dx ? fx : 1.0 - fx) * (dy ? fy : 1.0 - fy);
    }
  }
  return static_cast<float>(value);
}

// Generic inverse-mapped warp: for each destination pixel ask `invMap` for
// the source coordinates.
template <typename F>
Image warped(const Image& src, F invMap) {
  Image dst(src.height(), src.width());
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < src.height(); ++y) {
      for (int x = 0; x < src.width(); ++x) {
        double sx = 0.0;
        double sy = 0.0;
        invMap(x, y, sx, sy);
        dst.at(c, y, x) = clip(lookup(src, c, sx, sy));
      }
    }
  }
  return dst;
}

double grey(const Image& img, int y, int x) {
  return 0.299 * img.at(0, y, x) + 0.587 * img.at(1, y, x) + 0.114 * img.at(2, y, x);
}

}  // namespace

double refMagnitudeToParam(OpId op, double lambda) {
  // Table endpoints at lambda = 0 and lambda = 1.
  double lo = 0.0;
  double hi = 1.0;
  switch (op) {
    case OpId::shearX:
    case OpId::shearY:
      lo = -0.3;
      hi = 0.3;
      break;
    case OpId::translateX:
    case OpId::translateY:
      lo = -0.45;
      hi = 0.45;
      break;
    case OpId::rotate:
      lo = -30.0;
      hi = 30.0;
      break;
    case OpId::solarize:
      lo = 0.0;
      hi = 256.0;
      break;
    case OpId::posterize:
      lo = 4.0;
      hi = 8.0;
      break;
    case OpId::contrast:
    case OpId::color:
    case OpId::brightness:
    case OpId::sharpness:
      lo = 0.1;
      hi = 1.9;
      break;
    case OpId::cutout:
      lo = 0.0;
      hi = 0.2;
      break;
    default:
      break;  // autoContrast / invert / equalize: 0..1, value unused
  }
  const double v = lo + lambda * (hi - lo);
  if (op == OpId::posterize || op == OpId::solarize) return std::round(v);
  return v;
}

Image refApplyTransform(const Image& img, OpId op, double param, Rng& rng) {
  const int h = img.height();
  const int w = img.width();
  switch (op) {
    // "shear the image along the horizontal axis with magnitude rate"
    case OpId::shearX:
      return warped(img, [&](int x, int y, double& sx, double& sy) {
        sx = x + param * y;
        sy = y;
      });
    // "shear the image along the vertical axis with magnitude rate"
    case OpId::shearY:
      return warped(img, [&](int x, int y, double& sx, double& sy) {
        sx = x;
        sy = y + param * x;
      });
    // "translate the image in the horizontal direction by magnitude percentage"
    case OpId::translateX:
      return warped(img, [&](int x, int y, double& sx, double& sy) {
        sx = x + param * w;
        sy = y;
      });
    // "translate the image in the vertical direction by magnitude percentage"
    case OpId::translateY:
      return warped(img, [&](int x, int y, double& sx, double& sy) {
        sx = x;
        sy = y + param * h;
      });
    // "rotate the image by magnitude degrees" (counterclockwise about the
    // center, inverse-mapped)
    case OpId::rotate: {
      const double a = param * kPi / 180.0;
      const double cx = (w - 1) / 2.0;
      const double cy = (h - 1) / 2.0;
      return warped(img, [&](int x, int y, double& sx, double& sy) {
        const double dx = x - cx;
        const double dy = y - cy;
        sx = cx + std::cos(a) * dx - std::sin(a) * dy;
        sy = cy + std::sin(a) * dx + std::cos(a) * dy;
      });
    }
    // "adjust contrast so darkest pixel is black and lightest is white"
    case OpId::autoContrast: {
      Image out = img;
      for (int c = 0; c < 3; ++c) {
        float lo = img.at(c, 0, 0);
        float hi = img.at(c, 0, 0);
        for (int y = 0; y < h; ++y) {
          for (int x = 0; x < w; ++x) {
            lo = std::min(lo, img.at(c, y, x));
            hi = std::max(hi, img.at(c, y, x));
          }
        }
        if (!(hi > lo)) continue;
        for (int y = 0; y < h; ++y) {
          for (int x = 0; x < w; ++x) out.at(c, y, x) = clip((img.at(c, y, x) - lo) / (hi - lo));
        }
      }
      return out;
    }
    // "invert the pixels of the image"
    case OpId::invert: {
      Image out(h, w);
      for (int c = 0; c < 3; ++c) {
        for (int y = 0; y < h; ++y) {
          for (int x = 0; x < w; ++x) out.at(c, y, x) = 1.0f - img.at(c, y, x);
        }
      }
      return out;
    }
    // "invert the pixels above a magnitude threshold"
    case OpId::solarize: {
      const int threshold = static_cast<int>(param);
      Image out(h, w);
      for (int c = 0; c < 3; ++c) {
        for (int y = 0; y < h; ++y) {
          for (int x = 0; x < w; ++x) {
            const float v = img.at(c, y, x);
            out.at(c, y, x) = toByte(v) > threshold ? 1.0f - v : v;
          }
        }
      }
      return out;
    }
    // "reduce the number of bits for each color to magnitude"
    case OpId::posterize: {
      const int bits = static_cast<int>(param);
      if (bits >= 8) return img;
      Image out(h, w);
      for (int c = 0; c < 3; ++c) {
        for (int y = 0; y < h; ++y) {
          for (int x = 0; x < w; ++x) {
            const int kept = (toByte(img.at(c, y, x)) >> (8 - bits)) << (8 - bits);
            out.at(c, y, x) = static_cast<float>(kept) / 255.0f;
          }
        }
      }
      return out;
    }
    // "adjust image contrast, where magnitude 0 is grey and magnitude 1 is
    // original image"
    case OpId::contrast: {
      if (param == 1.0) return img;
      double mean = 0.0;
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) mean += grey(img, y, x);
      }
      mean /= static_cast<double>(h) * w;
      Image out(h, w);
      for (int c = 0; c < 3; ++c) {
        for (int y = 0; y < h; ++y) {
          for (int x = 0; x < w; ++x) {
            out.at(c, y, x) = clip(mean + param * (img.at(c, y, x) - mean));
          }
        }
      }
      return out;
    }
    // "adjust color of image such that magnitude 0 is black and white and
    // magnitude 1 is original image"
    case OpId::color: {
      if (param == 1.0) return img;
      Image out(h, w);
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          const double g = grey(img, y, x);
          for (int c = 0; c < 3; ++c) out.at(c, y, x) = clip(g + param * (img.at(c, y, x) - g));
        }
      }
      return out;
    }
    // "brightness adjustment such that magnitude 0 is black image and 1 is
    // original image"
    case OpId::brightness: {
      if (param == 1.0) return img;
      Image out(h, w);
      for (int c = 0; c < 3; ++c) {
        for (int y = 0; y < h; ++y) {
          for (int x = 0; x < w; ++x) out.at(c, y, x) = clip(param * img.at(c, y, x));
        }
      }
      return out;
    }
    // "magnitude 0 is a blurred image and 1 is original image"
    case OpId::sharpness: {
      if (param == 1.0) return img;
      static const double kKernel[3][3] = {{1, 1, 1}, {1, 5, 1}, {1, 1, 1}};
      Image blur = img;
      for (int c = 0; c < 3; ++c) {
        for (int y = 1; y < h - 1; ++y) {
          for (int x = 1; x < w - 1; ++x) {
            double acc = 0.0;
            for (int ky = 0; ky < 3; ++ky) {
              for (int kx = 0; kx < 3; ++kx) {
                acc += kKernel[ky][kx] * img.at(c, y + ky - 1, x + kx - 1);
              }
            }
            blur.at(c, y, x) = static_cast<float>(acc / 13.0);
          }
        }
      }
      Image out(h, w);
      for (int c = 0; c < 3; ++c) {
        for (int y = 0; y < h; ++y) {
          for (int x = 0; x < w; ++x) {
            const double b = blur.at(c, y, x);
            out.at(c, y, x) = clip(b + param * (img.at(c, y, x) - b));
          }
        }
      }
      return out;
    }
    // "cutout a random square from the image with side length equal to the
    // magnitude percentage of pixels"
    case OpId::cutout: {
      const int side = static_cast<int>(std::lround(param * std::min(h, w)));
      if (side <= 0) return img;
      const int cx = rng.uniformInt(w);
      const int cy = rng.uniformInt(h);
      Image out = img;
      for (int c = 0; c < 3; ++c) {
        for (int y = 0; y < h; ++y) {
          for (int x = 0; x < w; ++x) {
            const bool inX = x >= std::max(0, cx - side / 2) &&
                             x < std::min(w, std::max(0, cx - side / 2) + side);
            const bool inY = y >= std::max(0, cy - side / 2) &&
                             y < std::min(h, std::max(0, cy - side / 2) + side);
            if (inX && inY) out.at(c, y, x) = 0.0f;
          }
        }
      }
      return out;
    }
    // "equalize the image histogram"
    case OpId::equalize: {
      Image out = img;
      for (int c = 0; c < 3; ++c) {
        int hist[256] = {0};
        for (int y = 0; y < h; ++y) {
          for (int x = 0; x < w; ++x) hist[toByte(img.at(c, y, x))]++;
        }
        int total = 0;
        for (int v = 0; v < 256; ++v) total += hist[v];
        const int step = (total - hist[255]) / 255;
        if (step == 0) continue;
        int lut[256];
        int n = step / 2;
        for (int v = 0; v < 256; ++v) {
          lut[v] = std::min(n / step, 255);
          n += hist[v];
        }
        for (int y = 0; y < h; ++y) {
          for (int x = 0; x < w; ++x) {
            out.at(c, y, x) = static_cast<float>(lut[toByte(img.at(c, y, x))]) / 255.0f;
          }
        }
      }
      return out;
    }
    default:
      throw ContractError("refApplyTransform: op not covered by the reference");
  }
}

}  // namespace augsearch::testref
