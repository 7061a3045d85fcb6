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

#include "train/adam.hpp"

#include <cmath>

#include "common/error.hpp"

namespace nkws::train {

void AdamConfig::validate() const {
  if (!(lr0 > 0.0)) fail(ErrorCode::kConfigInvalid, "learning rate must be positive");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    fail(ErrorCode::kConfigInvalid, "Adam betas must be in [0, 1)");
  }
  if (!(eps > 0.0)) fail(ErrorCode::kConfigInvalid, "Adam eps must be positive");
}

template <typename T>
void adam_step(std::vector<nn::Tensor<T>>& params, const std::vector<nn::Tensor<T>>& grads,
               AdamState<T>& state, double lr, const AdamConfig& cfg) {
  if (grads.size() != params.size()) {
    fail(ErrorCode::kShapeMismatch, "gradient count disagrees with parameter count");
  }
  if (state.m.empty()) {
    state.m.resize(params.size());
    state.v.resize(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
      if (grads[i].empty()) continue;
      state.m[i] = nn::Tensor<T>(params[i].dims());
      state.v[i] = nn::Tensor<T>(params[i].dims());
    }
  }
  if (state.m.size() != params.size()) {
    fail(ErrorCode::kShapeMismatch, "Adam state does not match parameters");
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(cfg.beta1, t);
  const double c2 = 1.0 - std::pow(cfg.beta2, t);
  const T b1 = static_cast<T>(cfg.beta1);
  const T b2 = static_cast<T>(cfg.beta2);
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (grads[i].empty()) continue;
    nn::expect_dims(grads[i], params[i].dims(), "adam gradient");
    nn::expect_dims(state.m[i], params[i].dims(), "adam first moment");
    T* w = params[i].data();
    T* m = state.m[i].data();
    T* v = state.v[i].data();
    const T* g = grads[i].data();
    for (std::size_t k = 0; k < params[i].size(); ++k) {
      m[k] = b1 * m[k] + (T{1} - b1) * g[k];
      v[k] = b2 * v[k] + (T{1} - b2) * g[k] * g[k];
      const double m_hat = static_cast<double>(m[k]) / c1;
      const double v_hat = static_cast<double>(v[k]) / c2;
      w[k] = static_cast<T>(static_cast<double>(w[k]) -
                            lr * m_hat / (std::sqrt(v_hat) + cfg.eps));
    }
  }
}

template void adam_step(std::vector<nn::Tensor<float>>&, const std::vector<nn::Tensor<float>>&,
                        AdamState<float>&, double, const AdamConfig&);
template void adam_step(std::vector<nn::Tensor<double>>&,
                        const std::vector<nn::Tensor<double>>&, AdamState<double>&, double,
                        const AdamConfig&);

}  // namespace nkws::train
