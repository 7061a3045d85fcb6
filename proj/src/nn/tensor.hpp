/* Copyright 2026 The NoiseKWS Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef NOISEKWS_NN_TENSOR_HPP_
#define NOISEKWS_NN_TENSOR_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "common/error.hpp"

namespace nkws::nn {

using Dims = std::vector<std::size_t>;

inline std::size_t dims_product(const Dims& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                         std::multiplies<>());
}

inline std::string dims_string(const Dims& dims) {
  std::string s = "[";
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(dims[i]);
  }
  return s + "]";
}

// Dense row-major tensor.
template <typename T>
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Dims dims, T fill = T{0})
      : dims_(std::move(dims)), data_(dims_product(dims_), fill) {}
  Tensor(Dims dims, std::vector<T> data) : dims_(std::move(dims)), data_(std::move(data)) {
    if (data_.size() != dims_product(dims_)) {
      fail(ErrorCode::kShapeMismatch, "tensor data length disagrees with dims " +
                                          dims_string(dims_));
    }
  }

  const Dims& dims() const { return dims_; }
  std::size_t dim(std::size_t i) const { return dims_.at(i); }
  std::size_t rank() const { return dims_.size(); }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }
  std::vector<T>& storage() { return data_; }
  const std::vector<T>& storage() const { return data_; }

  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  void fill(T value) { std::fill(data_.begin(), data_.end(), value); }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](T v) { return std::isfinite(v); });
  }

  template <typename U>
  Tensor<U> cast() const {
    std::vector<U> out(data_.size());
    std::transform(data_.begin(), data_.end(), out.begin(),
                   [](T v) { return static_cast<U>(v); });
    return Tensor<U>(dims_, std::move(out));
  }

  bool operator==(const Tensor&) const = default;

 private:
  Dims dims_;
  std::vector<T> data_;
};

template <typename T>
void expect_dims(const Tensor<T>& t, const Dims& want, const char* what) {
  if (t.dims() != want) {
    fail(ErrorCode::kShapeMismatch, std::string(what) + ": expected " +
                                        dims_string(want) + ", got " +
                                        dims_string(t.dims()));
  }
}

template <typename T>
void expect_rank(const Tensor<T>& t, std::size_t rank, const char* what) {
  if (t.rank() != rank) {
    fail(ErrorCode::kShapeMismatch, std::string(what) + ": expected rank " +
                                        std::to_string(rank) + ", got " +
                                        dims_string(t.dims()));
  }
}

}  // namespace nkws::nn

#endif  // NOISEKWS_NN_TENSOR_HPP_
