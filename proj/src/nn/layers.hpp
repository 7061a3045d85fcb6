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

#ifndef NOISEKWS_NN_LAYERS_HPP_
#define NOISEKWS_NN_LAYERS_HPP_

#include <span>
#include <vector>

#include "nn/tensor.hpp"

namespace nkws::nn {

enum class Mode { kTrain, kInfer };

// Cross-correlation with "same" zero padding ((k - 1) / 2 per side, odd
// kernels only). input [N][Cin][H][W], kernels [Cout][Cin][kh][kw],
// bias [Cout] -> [N][Cout][H'][W'], H' = (H - 1) / stride + 1.
template <typename T>
Tensor<T> conv2d_forward(const Tensor<T>& input, const Tensor<T>& kernels,
                         const Tensor<T>& bias, int stride);

template <typename T>
struct ConvGrads {
  Tensor<T> input;
  Tensor<T> kernels;
  Tensor<T> bias;
};

template <typename T>
ConvGrads<T> conv2d_backward(const Tensor<T>& input, const Tensor<T>& kernels,
                             const Tensor<T>& grad_out, int stride);

// What the backward pass needs from a train-mode forward.
template <typename T>
struct BatchNormCache {
  Tensor<T> x_hat;
  std::vector<double> inv_std;
};

// Per-channel normalization of [N][C][H][W]. Train mode uses the biased batch
// variance and folds the batch statistics into the running ones:
// running = (1 - momentum) * running + momentum * batch, with the unbiased
// variance for running_var. Infer mode reads the running statistics only.
template <typename T>
Tensor<T> batchnorm_forward(const Tensor<T>& input, const Tensor<T>& gamma,
                            const Tensor<T>& beta, Tensor<T>& running_mean,
                            Tensor<T>& running_var, Mode mode, double momentum,
                            double eps, BatchNormCache<T>* cache = nullptr);

// Infer-mode forward that leaves the running statistics untouched.
template <typename T>
Tensor<T> batchnorm_infer(const Tensor<T>& input, const Tensor<T>& gamma,
                          const Tensor<T>& beta, const Tensor<T>& running_mean,
                          const Tensor<T>& running_var, double eps);

template <typename T>
struct BatchNormGrads {
  Tensor<T> input;
  Tensor<T> gamma;
  Tensor<T> beta;
};

// Gradients of the train-mode map.
template <typename T>
BatchNormGrads<T> batchnorm_backward(const Tensor<T>& grad_out,
                                     const Tensor<T>& gamma,
                                     const BatchNormCache<T>& cache);

template <typename T>
Tensor<T> relu_forward(const Tensor<T>& input);

// Gradient passes where input > 0; the subgradient at 0 is 0.
template <typename T>
Tensor<T> relu_backward(const Tensor<T>& input, const Tensor<T>& grad_out);

// [N][C][H][W] -> [N][C]
template <typename T>
Tensor<T> global_avg_pool_forward(const Tensor<T>& input);

template <typename T>
Tensor<T> global_avg_pool_backward(const Tensor<T>& grad_out, std::size_t height,
                                   std::size_t width);

// features [N][C], weights [K][C], bias [K] -> logits [N][K]
template <typename T>
Tensor<T> fc_forward(const Tensor<T>& features, const Tensor<T>& weights,
                     const Tensor<T>& bias);

template <typename T>
struct FcGrads {
  Tensor<T> features;
  Tensor<T> weights;
  Tensor<T> bias;
};

template <typename T>
FcGrads<T> fc_backward(const Tensor<T>& features, const Tensor<T>& weights,
                       const Tensor<T>& grad_logits);

// Row-wise softmax with max subtraction.
template <typename T>
Tensor<T> softmax(const Tensor<T>& logits);

template <typename T>
struct LossAndGrad {
  double loss = 0.0;
  Tensor<T> grad_logits;
};

// Mean over the batch of -log softmax(logits)[label];
// grad = (softmax - onehot) / N.
template <typename T>
LossAndGrad<T> softmax_cross_entropy(const Tensor<T>& logits,
                                     std::span<const int> labels);

}  // namespace nkws::nn

#endif  // NOISEKWS_NN_LAYERS_HPP_
