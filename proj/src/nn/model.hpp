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

#ifndef NOISEKWS_NN_MODEL_HPP_
#define NOISEKWS_NN_MODEL_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "nn/layers.hpp"
#include "nn/tensor.hpp"

namespace nkws::nn {

enum class Activation { kRelu, kIdentity };

const char* activation_name(Activation a);
Activation parse_activation(const std::string& name);

struct ConvBlockSpec {
  int out_channels = 16;
  int kernel_h = 3;
  int kernel_w = 3;
  int stride = 1;
  Activation activation = Activation::kRelu;

  bool operator==(const ConvBlockSpec&) const = default;
};

inline constexpr std::size_t kConvBlocks = 5;
inline constexpr int kOutputClasses = 12;

// Declarative layer list: five conv -> batch-norm -> activation blocks,
// global average pooling, then a fully-connected classifier.
struct ArchSpec {
  int in_channels = 1;
  int input_height = 101;
  int input_width = 64;
  std::vector<ConvBlockSpec> blocks;
  int n_classes = kOutputClasses;
  double bn_eps = 1e-5;
  double bn_momentum = 0.1;

  // Channels 16/32/32/64/64, 3x3 kernels, stride 1, ReLU.
  static ArchSpec fallback();
  static ArchSpec with_channels(const std::vector<int>& channels, int kernel = 3);

  // Throws ConfigInvalid.
  void validate() const;
  std::size_t feature_dim() const;

  bool operator==(const ArchSpec&) const = default;
};

// Named tensors in a fixed order: per block conv.weight, conv.bias, bn.gamma,
// bn.beta, bn.running_mean, bn.running_var; then fc.weight, fc.bias.
template <typename T>
struct ModelParams {
  static constexpr std::size_t kPerBlock = 6;

  std::vector<std::string> names;
  std::vector<Tensor<T>> tensors;

  std::size_t num_blocks() const { return (tensors.size() - 2) / kPerBlock; }

  Tensor<T>& conv_kernels(std::size_t b) { return tensors[b * kPerBlock + 0]; }
  Tensor<T>& conv_bias(std::size_t b) { return tensors[b * kPerBlock + 1]; }
  Tensor<T>& bn_gamma(std::size_t b) { return tensors[b * kPerBlock + 2]; }
  Tensor<T>& bn_beta(std::size_t b) { return tensors[b * kPerBlock + 3]; }
  Tensor<T>& bn_running_mean(std::size_t b) { return tensors[b * kPerBlock + 4]; }
  Tensor<T>& bn_running_var(std::size_t b) { return tensors[b * kPerBlock + 5]; }
  Tensor<T>& fc_weights() { return tensors[tensors.size() - 2]; }
  Tensor<T>& fc_bias() { return tensors[tensors.size() - 1]; }

  const Tensor<T>& conv_kernels(std::size_t b) const { return tensors[b * kPerBlock + 0]; }
  const Tensor<T>& conv_bias(std::size_t b) const { return tensors[b * kPerBlock + 1]; }
  const Tensor<T>& bn_gamma(std::size_t b) const { return tensors[b * kPerBlock + 2]; }
  const Tensor<T>& bn_beta(std::size_t b) const { return tensors[b * kPerBlock + 3]; }
  const Tensor<T>& bn_running_mean(std::size_t b) const { return tensors[b * kPerBlock + 4]; }
  const Tensor<T>& bn_running_var(std::size_t b) const { return tensors[b * kPerBlock + 5]; }
  const Tensor<T>& fc_weights() const { return tensors[tensors.size() - 2]; }
  const Tensor<T>& fc_bias() const { return tensors[tensors.size() - 1]; }

  // Running statistics are state, not trainable parameters.
  bool learnable(std::size_t i) const {
    if (i + 2 >= tensors.size()) return true;
    const std::size_t slot = i % kPerBlock;
    return slot != 4 && slot != 5;
  }
  bool is_fc(std::size_t i) const { return i + 2 >= tensors.size(); }

  std::size_t total_values() const {
    std::size_t n = 0;
    for (const auto& t : tensors) n += t.size();
    return n;
  }

  template <typename U>
  ModelParams<U> cast() const {
    ModelParams<U> out;
    out.names = names;
    for (const auto& t : tensors) out.tensors.push_back(t.template cast<U>());
    return out;
  }

  bool operator==(const ModelParams&) const = default;
};

// One gradient per tensor of ModelParams; entries for running statistics stay
// empty.
template <typename T>
struct GradientSet {
  std::vector<Tensor<T>> tensors;
};

// Glorot-uniform conv/fc weights, zero biases, gamma 1, beta 0, running
// statistics (0, 1).
ModelParams<float> init_params(const ArchSpec& arch, std::uint64_t seed);

// Empty parameter set with every tensor shaped for arch.
template <typename T>
ModelParams<T> zero_params(const ArchSpec& arch);

// Throws ShapeMismatch when params do not fit arch.
template <typename T>
void check_params(const ModelParams<T>& params, const ArchSpec& arch);

template <typename T>
struct BlockCache {
  Tensor<T> input;
  BatchNormCache<T> bn;
  Tensor<T> pre_activation;
};

template <typename T>
struct ForwardCache {
  std::vector<BlockCache<T>> blocks;
  Tensor<T> features;
  std::size_t last_height = 0;
  std::size_t last_width = 0;
};

// Output of global average pooling with batch norm in infer mode, [N][C_last].
template <typename T>
Tensor<T> model_features(const ModelParams<T>& params, const ArchSpec& arch,
                         const Tensor<T>& batch);

// Infer-mode logits [N][n_classes]; a pure function of params and batch.
template <typename T>
Tensor<T> model_forward(const ModelParams<T>& params, const ArchSpec& arch,
                        const Tensor<T>& batch);

// Either mode. Train mode updates the running statistics in params and fills
// cache for model_backward.
template <typename T>
Tensor<T> model_forward(ModelParams<T>& params, const ArchSpec& arch,
                        const Tensor<T>& batch, Mode mode,
                        ForwardCache<T>* cache = nullptr);

// Gradients of the train-mode forward that produced cache.
template <typename T>
GradientSet<T> model_backward(const ModelParams<T>& params, const ArchSpec& arch,
                              const ForwardCache<T>& cache,
                              const Tensor<T>& grad_logits);

}  // namespace nkws::nn

#endif  // NOISEKWS_NN_MODEL_HPP_
