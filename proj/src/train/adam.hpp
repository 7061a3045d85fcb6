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

#ifndef NOISEKWS_TRAIN_ADAM_HPP_
#define NOISEKWS_TRAIN_ADAM_HPP_

#include <cstdint>
#include <vector>

#include "nn/tensor.hpp"

namespace nkws::train {

struct AdamConfig {
  double lr0 = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  void validate() const;
};

template <typename T>
struct AdamState {
  std::uint64_t step = 0;
  std::vector<nn::Tensor<T>> m;
  std::vector<nn::Tensor<T>> v;
};

// One bias-corrected Adam update of every parameter whose gradient is
// non-empty. Moments are allocated on the first call.
template <typename T>
void adam_step(std::vector<nn::Tensor<T>>& params, const std::vector<nn::Tensor<T>>& grads,
               AdamState<T>& state, double lr, const AdamConfig& cfg);

}  // namespace nkws::train

#endif  // NOISEKWS_TRAIN_ADAM_HPP_
