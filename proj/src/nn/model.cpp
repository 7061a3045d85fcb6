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

#include "nn/model.hpp"

#include <cmath>

#include "common/error.hpp"
#include "common/rng.hpp"

namespace nkws::nn {

const char* activation_name(Activation a) {
  return a == Activation::kRelu ? "relu" : "identity";
}

Activation parse_activation(const std::string& name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "identity" || name == "linear") return Activation::kIdentity;
  fail(ErrorCode::kConfigInvalid, "unknown activation '" + name + "'");
}

ArchSpec ArchSpec::fallback() { return with_channels({16, 32, 32, 64, 64}); }

ArchSpec ArchSpec::with_channels(const std::vector<int>& channels, int kernel) {
  ArchSpec arch;
  for (int c : channels) {
    ConvBlockSpec b;
    b.out_channels = c;
    b.kernel_h = kernel;
    b.kernel_w = kernel;
    arch.blocks.push_back(b);
  }
  return arch;
}

void ArchSpec::validate() const {
  if (blocks.size() != kConvBlocks) {
    fail(ErrorCode::kConfigInvalid,
         "architecture needs exactly 5 conv blocks, got " + std::to_string(blocks.size()));
  }
  if (n_classes != kOutputClasses) {
    fail(ErrorCode::kConfigInvalid, "architecture must classify 12 classes");
  }
  if (in_channels < 1 || input_height < 1 || input_width < 1) {
    fail(ErrorCode::kConfigInvalid, "input dims must be positive");
  }
  for (const auto& b : blocks) {
    if (b.out_channels < 1 || b.kernel_h < 1 || b.kernel_w < 1 || b.stride < 1) {
      fail(ErrorCode::kConfigInvalid, "conv block sizes must be positive");
    }
    if (b.kernel_h % 2 == 0 || b.kernel_w % 2 == 0) {
      fail(ErrorCode::kConfigInvalid, "conv kernels must have odd sizes");
    }
  }
  if (!(bn_eps > 0.0) || !(bn_momentum > 0.0 && bn_momentum <= 1.0)) {
    fail(ErrorCode::kConfigInvalid, "batch-norm eps/momentum out of range");
  }
}

std::size_t ArchSpec::feature_dim() const {
  return blocks.empty() ? static_cast<std::size_t>(in_channels)
                        : static_cast<std::size_t>(blocks.back().out_channels);
}

template <typename T>
ModelParams<T> zero_params(const ArchSpec& arch) {
  arch.validate();
  ModelParams<T> p;
  std::size_t cin = static_cast<std::size_t>(arch.in_channels);
  for (std::size_t b = 0; b < arch.blocks.size(); ++b) {
    const auto& spec = arch.blocks[b];
    const auto cout = static_cast<std::size_t>(spec.out_channels);
    const std::string prefix = "block" + std::to_string(b) + ".";
    p.names.push_back(prefix + "conv.weight");
    p.tensors.emplace_back(Dims{cout, cin, static_cast<std::size_t>(spec.kernel_h),
                                static_cast<std::size_t>(spec.kernel_w)});
    p.names.push_back(prefix + "conv.bias");
    p.tensors.emplace_back(Dims{cout});
    p.names.push_back(prefix + "bn.gamma");
    p.tensors.emplace_back(Dims{cout}, T{1});
    p.names.push_back(prefix + "bn.beta");
    p.tensors.emplace_back(Dims{cout});
    p.names.push_back(prefix + "bn.running_mean");
    p.tensors.emplace_back(Dims{cout});
    p.names.push_back(prefix + "bn.running_var");
    p.tensors.emplace_back(Dims{cout}, T{1});
    cin = cout;
  }
  const auto k = static_cast<std::size_t>(arch.n_classes);
  p.names.push_back("fc.weight");
  p.tensors.emplace_back(Dims{k, cin});
  p.names.push_back("fc.bias");
  p.tensors.emplace_back(Dims{k});
  return p;
}

ModelParams<float> init_params(const ArchSpec& arch, std::uint64_t seed) {
  ModelParams<float> p = zero_params<float>(arch);
  Rng rng(seed);
  const auto glorot = [&rng](Tensor<float>& w, double fan_in, double fan_out) {
    const double s = std::sqrt(6.0 / (fan_in + fan_out));
    for (auto& v : w.values()) v = static_cast<float>(rng.uniform(-s, s));
  };
  for (std::size_t b = 0; b < p.num_blocks(); ++b) {
    auto& w = p.conv_kernels(b);
    const double field = static_cast<double>(w.dim(2) * w.dim(3));
    glorot(w, static_cast<double>(w.dim(1)) * field, static_cast<double>(w.dim(0)) * field);
  }
  auto& fc = p.fc_weights();
  glorot(fc, static_cast<double>(fc.dim(1)), static_cast<double>(fc.dim(0)));
  return p;
}

template <typename T>
void check_params(const ModelParams<T>& params, const ArchSpec& arch) {
  const auto want = zero_params<T>(arch);
  if (params.tensors.size() != want.tensors.size() ||
      params.names.size() != want.names.size()) {
    fail(ErrorCode::kShapeMismatch, "parameter count does not match architecture");
  }
  for (std::size_t i = 0; i < want.tensors.size(); ++i) {
    if (params.names[i] != want.names[i]) {
      fail(ErrorCode::kShapeMismatch, "expected tensor " + want.names[i] + ", found " +
                                          params.names[i]);
    }
    expect_dims(params.tensors[i], want.tensors[i].dims(), want.names[i].c_str());
  }
}

namespace {

template <typename T>
void expect_input(const Tensor<T>& batch, const ArchSpec& arch) {
  expect_rank(batch, 4, "model input");
  if (batch.dim(1) != static_cast<std::size_t>(arch.in_channels) ||
      batch.dim(2) != static_cast<std::size_t>(arch.input_height) ||
      batch.dim(3) != static_cast<std::size_t>(arch.input_width)) {
    fail(ErrorCode::kShapeMismatch,
         "model input " + dims_string(batch.dims()) + " does not match architecture [N]x" +
             std::to_string(arch.in_channels) + "x" + std::to_string(arch.input_height) +
             "x" + std::to_string(arch.input_width));
  }
}

template <typename T>
Tensor<T> activate(const Tensor<T>& x, Activation a) {
  return a == Activation::kRelu ? relu_forward(x) : x;
}

}  // namespace

template <typename T>
Tensor<T> model_features(const ModelParams<T>& params, const ArchSpec& arch,
                         const Tensor<T>& batch) {
  expect_input(batch, arch);
  Tensor<T> x = batch;
  for (std::size_t b = 0; b < arch.blocks.size(); ++b) {
    const auto& spec = arch.blocks[b];
    Tensor<T> z = conv2d_forward(x, params.conv_kernels(b), params.conv_bias(b), spec.stride);
    z = batchnorm_infer(z, params.bn_gamma(b), params.bn_beta(b), params.bn_running_mean(b),
                        params.bn_running_var(b), arch.bn_eps);
    x = activate(z, spec.activation);
  }
  return global_avg_pool_forward(x);
}

template <typename T>
Tensor<T> model_forward(const ModelParams<T>& params, const ArchSpec& arch,
                        const Tensor<T>& batch) {
  return fc_forward(model_features(params, arch, batch), params.fc_weights(),
                    params.fc_bias());
}

template <typename T>
Tensor<T> model_forward(ModelParams<T>& params, const ArchSpec& arch,
                        const Tensor<T>& batch, Mode mode, ForwardCache<T>* cache) {
  if (mode == Mode::kInfer) {
    Tensor<T> features = model_features(params, arch, batch);
    if (cache) cache->features = features;
    return fc_forward(features, params.fc_weights(), params.fc_bias());
  }
  expect_input(batch, arch);
  if (cache) cache->blocks.assign(arch.blocks.size(), {});
  Tensor<T> x = batch;
  for (std::size_t b = 0; b < arch.blocks.size(); ++b) {
    const auto& spec = arch.blocks[b];
    Tensor<T> z = conv2d_forward(x, params.conv_kernels(b), params.conv_bias(b), spec.stride);
    BatchNormCache<T>* bn_cache = cache ? &cache->blocks[b].bn : nullptr;
    Tensor<T> y = batchnorm_forward(z, params.bn_gamma(b), params.bn_beta(b),
                                    params.bn_running_mean(b), params.bn_running_var(b),
                                    Mode::kTrain, arch.bn_momentum, arch.bn_eps, bn_cache);
    Tensor<T> a = activate(y, spec.activation);
    if (cache) {
      cache->blocks[b].input = std::move(x);
      cache->blocks[b].pre_activation = std::move(y);
    }
    x = std::move(a);
  }
  Tensor<T> features = global_avg_pool_forward(x);
  if (cache) {
    cache->last_height = x.dim(2);
    cache->last_width = x.dim(3);
    cache->features = features;
  }
  return fc_forward(features, params.fc_weights(), params.fc_bias());
}

template <typename T>
GradientSet<T> model_backward(const ModelParams<T>& params, const ArchSpec& arch,
                              const ForwardCache<T>& cache,
                              const Tensor<T>& grad_logits) {
  if (cache.blocks.size() != arch.blocks.size()) {
    fail(ErrorCode::kShapeMismatch, "backward needs a train-mode forward cache");
  }
  GradientSet<T> grads;
  grads.tensors.resize(params.tensors.size());
  auto fc = fc_backward(cache.features, params.fc_weights(), grad_logits);
  grads.tensors[params.tensors.size() - 2] = std::move(fc.weights);
  grads.tensors[params.tensors.size() - 1] = std::move(fc.bias);

  Tensor<T> g = global_avg_pool_backward(fc.features, cache.last_height, cache.last_width);
  for (std::size_t bi = arch.blocks.size(); bi-- > 0;) {
    const auto& spec = arch.blocks[bi];
    const auto& bc = cache.blocks[bi];
    if (spec.activation == Activation::kRelu) g = relu_backward(bc.pre_activation, g);
    auto bn = batchnorm_backward(g, params.bn_gamma(bi), bc.bn);
    auto conv = conv2d_backward(bc.input, params.conv_kernels(bi), bn.input, spec.stride);
    const std::size_t base = bi * ModelParams<T>::kPerBlock;
    grads.tensors[base + 0] = std::move(conv.kernels);
    grads.tensors[base + 1] = std::move(conv.bias);
    grads.tensors[base + 2] = std::move(bn.gamma);
    grads.tensors[base + 3] = std::move(bn.beta);
    g = std::move(conv.input);
  }
  return grads;
}

#define NKWS_INSTANTIATE_MODEL(T)                                                   \
  template ModelParams<T> zero_params<T>(const ArchSpec&);                          \
  template void check_params(const ModelParams<T>&, const ArchSpec&);               \
  template Tensor<T> model_features(const ModelParams<T>&, const ArchSpec&,         \
                                    const Tensor<T>&);                              \
  template Tensor<T> model_forward(const ModelParams<T>&, const ArchSpec&,          \
                                   const Tensor<T>&);                               \
  template Tensor<T> model_forward(ModelParams<T>&, const ArchSpec&,                \
                                   const Tensor<T>&, Mode, ForwardCache<T>*);       \
  template GradientSet<T> model_backward(const ModelParams<T>&, const ArchSpec&,    \
                                         const ForwardCache<T>&, const Tensor<T>&);

NKWS_INSTANTIATE_MODEL(float)
NKWS_INSTANTIATE_MODEL(double)

#undef NKWS_INSTANTIATE_MODEL

}  // namespace nkws::nn
