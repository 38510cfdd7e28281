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

#ifndef AUGSEARCH_CORE_TENSOR_HPP
#define AUGSEARCH_CORE_TENSOR_HPP

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <string>
#include <vector>

#include "augsearch/core/error.hpp"

namespace augsearch {

/// Dense N-dimensional array, row-major. The float instantiation is the
/// storage type everywhere (images, parameters, checkpoints); the double
/// instantiation exists for gradient verification.
template <typename S>
struct TensorT {
  std::vector<int> shape;
  std::vector<S> data;

  TensorT() = default;

  explicit TensorT(std::vector<int> s) : shape(std::move(s)) {
    data.assign(numelOf(shape), S(0));
  }

  TensorT(std::vector<int> s, std::vector<S> d) : shape(std::move(s)), data(std::move(d)) {
    AUGS_REQUIRE(data.size() == numelOf(shape), "Tensor: data size does not match shape");
  }

  static std::size_t numelOf(const std::vector<int>& s) {
    std::size_t n = 1;
    for (int d : s) {
      AUGS_REQUIRE(d > 0, "Tensor: dimensions must be positive");
      n *= static_cast<std::size_t>(d);
    }
    return n;
  }

  std::size_t numel() const { return data.size(); }
  int dim(int i) const { return shape.at(static_cast<std::size_t>(i)); }
  int rank() const { return static_cast<int>(shape.size()); }

  S& at(std::initializer_list<int> idx) { return data[offset(idx)]; }
  S at(std::initializer_list<int> idx) const { return data[offset(idx)]; }

  std::size_t offset(std::initializer_list<int> idx) const {
    AUGS_REQUIRE(idx.size() == shape.size(), "Tensor: index rank mismatch");
    std::size_t off = 0;
    std::size_t k = 0;
    for (int i : idx) {
      off = off * static_cast<std::size_t>(shape[k]) + static_cast<std::size_t>(i);
      ++k;
    }
    return off;
  }

  void fill(S v) { std::fill(data.begin(), data.end(), v); }

  bool allFinite() const {
    for (S v : data) {
      if (!std::isfinite(static_cast<double>(v))) return false;
    }
    return true;
  }

  bool sameShape(const TensorT& other) const { return shape == other.shape; }

  template <typename T>
  TensorT<T> cast() const {
    TensorT<T> out;
    out.shape = shape;
    out.data.resize(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) out.data[i] = static_cast<T>(data[i]);
    return out;
  }
};

using Tensor = TensorT<float>;

inline std::string shapeToString(const std::vector<int>& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i]);
  }
  return out + "]";
}

}  // namespace augsearch

#endif  // AUGSEARCH_CORE_TENSOR_HPP
