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

// Finite-difference helpers shared by the unit tests and the acceptance run.

#ifndef NOISEKWS_TESTS_ORACLES_HPP_
#define NOISEKWS_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "common/rng.hpp"
#include "nn/model.hpp"
#include "nn/tensor.hpp"

namespace nkws::testing {

template <typename T>
nn::Tensor<T> random_tensor(Rng& rng, nn::Dims dims, double lo = -1.0, double hi = 1.0) {
  nn::Tensor<T> t(std::move(dims));
  for (auto& v : t.values()) v = static_cast<T>(rng.uniform(lo, hi));
  return t;
}

inline double dot(const nn::Tensor<double>& a, const nn::Tensor<double>& b) {
  return std::inner_product(a.values().begin(), a.values().end(), b.values().begin(), 0.0);
}

// Relative error of two gradient vectors in the Euclidean norm.
inline double grad_rel_err(const std::vector<double>& a, const std::vector<double>& b) {
  double diff = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return std::sqrt(diff) / std::max({std::sqrt(na), std::sqrt(nb), 1e-12});
}

// Central differences of loss with respect to every entry of x.
inline std::vector<double> numeric_grad(nn::Tensor<double>& x, const std::function<double()>& loss,
                                        double h) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double keep = x[i];
    x[i] = keep + h;
    const double up = loss();
    x[i] = keep - h;
    const double down = loss();
    x[i] = keep;
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

inline std::vector<double> as_vector(const nn::Tensor<double>& t) {
  return {t.values().begin(), t.values().end()};
}

// Distance of the closest ReLU input to its kink. Central differences are only
// valid when no perturbation of size h flips an activation.
template <typename T>
double min_abs_preactivation(const nn::ForwardCache<T>& cache) {
  double m = INFINITY;
  for (const auto& b : cache.blocks) {
    for (const T v : b.pre_activation.values()) m = std::min(m, std::abs(static_cast<double>(v)));
  }
  return m;
}

inline constexpr double kKinkMargin = 1e-3;

}  // namespace nkws::testing

#endif  // NOISEKWS_TESTS_ORACLES_HPP_
