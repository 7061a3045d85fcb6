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

#ifndef NOISEKWS_ADAPT_ADAPT_HPP_
#define NOISEKWS_ADAPT_ADAPT_HPP_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "dataset/noise.hpp"
#include "dataset/sets.hpp"
#include "nn/model.hpp"
#include "nn/weights_io.hpp"
#include "train/trainer.hpp"

namespace nkws::adapt {

struct AdaptConfig {
  int shots_per_class = 1;
  int epochs = 1;
  double lr = 1e-4;

  // Shots and epochs must lie in 1..5, lr must be >= 0.
  void validate() const;
};

// Pretrained weights plus a replacement fc layer. Every other tensor is the
// shared, immutable base.
struct AdaptedModel {
  std::shared_ptr<const nn::ModelParams<float>> base;
  nn::Tensor<float> fc_weights;
  nn::Tensor<float> fc_bias;
  data::NoiseCondition condition;
  AdaptConfig config;
  std::uint64_t seed = 0;
  std::size_t steps = 0;

  nn::ModelParams<float> materialize() const;
  nn::Provenance provenance(std::uint32_t base_checksum) const;
};

// Global-average-pooled features with batch norm in infer mode: [N][C_last].
nn::Tensor<float> extract_features(const nn::ModelParams<float>& params,
                                   const nn::ArchSpec& arch, const nn::Tensor<float>& batch);

// One per-sample SGD step on the fc layer under cross-entropy:
// p = softmax(W f + b); W -= lr (p - onehot(y)) f^T; b -= lr (p - onehot(y)).
template <typename T>
void fc_sgd_step(nn::Tensor<T>& weights, nn::Tensor<T>& bias, std::span<const T> features,
                 int label, double lr);

struct AdaptOptions {
  // Re-run the frozen feature extractor every epoch instead of caching it.
  bool recompute_features = false;
};

// Fine-tunes only the fc layer on spectrogram shots: each epoch visits every
// shot once in a seeded shuffled order.
AdaptedModel adapt(std::shared_ptr<const nn::ModelParams<float>> base, const nn::ArchSpec& arch,
                   const train::FeatureSet& shots, const data::NoiseCondition& condition,
                   const AdaptConfig& cfg, std::uint64_t seed, const AdaptOptions& options = {});

// Same, from cached shot features [N][C_last] and their labels.
AdaptedModel adapt_features(std::shared_ptr<const nn::ModelParams<float>> base,
                            const nn::Tensor<float>& features, std::span<const int> labels,
                            const data::NoiseCondition& condition, const AdaptConfig& cfg,
                            std::uint64_t seed);

// Top-1 predictions of an fc layer applied to cached features.
std::vector<int> predict_from_features(const nn::Tensor<float>& weights,
                                       const nn::Tensor<float>& bias,
                                       const nn::Tensor<float>& features);

struct SweepSpec {
  std::vector<std::string> sources;
  std::vector<int> adapt_snrs;
  // Empty: test only at the adaptation SNR. Otherwise every listed SNR.
  std::vector<int> test_snrs;
  std::vector<int> shots = {1};
  std::vector<int> epochs = {1};
  std::vector<std::uint64_t> seeds = {1};
  double lr = 1e-4;
  // Fixes the noisy test mixtures, shared by every cell.
  std::uint64_t data_seed = 1;
};

struct SweepRow {
  std::string source;
  int adapt_snr_db = 0;
  int test_snr_db = 0;
  int shots = 0;
  int epochs = 0;
  std::uint64_t seed = 0;
  double accuracy_before = 0.0;
  double accuracy_after = 0.0;
  std::size_t n_examples = 0;
};

// Adapts base for every (source, adapt SNR, shots, epochs, seed) cell and
// scores it on the noisy test split at each requested test SNR. Rows come out
// sorted by source, adapt SNR, shots, epochs, seed, test SNR.
std::vector<SweepRow> adaptation_sweep(std::shared_ptr<const nn::ModelParams<float>> base,
                                       const nn::ArchSpec& arch, const train::DataInputs& in,
                                       const SweepSpec& spec);

}  // namespace nkws::adapt

#endif  // NOISEKWS_ADAPT_ADAPT_HPP_
