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

#include "train/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "common/error.hpp"
#include "common/rng.hpp"
#include "dataset/noise.hpp"
#include "nn/layers.hpp"

namespace nkws::train {

void TrainConfig::validate() const {
  adam.validate();
  plateau.validate();
  if (batch_size < 1) fail(ErrorCode::kConfigInvalid, "batch size must be >= 1");
  if (max_epochs < 0) fail(ErrorCode::kConfigInvalid, "max_epochs must be >= 0");
}

void FeatureSet::append(const dsp::Spectrogram& spec, int label) {
  if (spec.rows != rows || spec.cols != cols) {
    fail(ErrorCode::kShapeMismatch, "spectrogram is " + std::to_string(spec.rows) + "x" +
                                        std::to_string(spec.cols) + ", feature set expects " +
                                        std::to_string(rows) + "x" + std::to_string(cols));
  }
  data.insert(data.end(), spec.values.begin(), spec.values.end());
  labels.push_back(label);
}

void FeatureSet::append(const FeatureSet& other) {
  if (other.rows != rows || other.cols != cols) {
    fail(ErrorCode::kShapeMismatch, "feature sets have different example shapes");
  }
  data.insert(data.end(), other.data.begin(), other.data.end());
  labels.insert(labels.end(), other.labels.begin(), other.labels.end());
}

nn::Tensor<float> FeatureSet::batch(std::span<const std::size_t> indices) const {
  nn::Tensor<float> out({indices.size(), 1, rows, cols});
  float* dst = out.data();
  for (std::size_t i : indices) {
    const auto src = example(i);
    dst = std::copy(src.begin(), src.end(), dst);
  }
  return out;
}

nn::Tensor<float> FeatureSet::all() const { return nn::Tensor<float>({size(), 1, rows, cols}, data); }

FeatureSet featurize(std::span<const data::ExampleSpec> examples, const data::ClipLoader& loader,
                     const dsp::LogMelFrontend& frontend) {
  FeatureSet out;
  out.data.reserve(examples.size() * out.example_size());
  for (const auto& spec : examples) {
    out.append(frontend.compute(loader.load(spec)), spec.label.index);
  }
  return out;
}

namespace {

std::vector<int> batch_labels(const FeatureSet& set, std::span<const std::size_t> indices) {
  std::vector<int> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(set.labels[i]);
  return out;
}

}  // namespace

TrainResult train_model(const nn::ArchSpec& arch, const FeatureSet& train_set,
                        const FeatureSet& val_set, const TrainConfig& cfg,
                        const EpochCallback& on_epoch) {
  return train_model(arch, nn::init_params(arch, derive_seed(cfg.seed, "init")), train_set,
                     val_set, cfg, on_epoch);
}

TrainResult train_model(const nn::ArchSpec& arch, nn::ModelParams<float> init,
                        const FeatureSet& train_set, const FeatureSet& val_set,
                        const TrainConfig& cfg, const EpochCallback& on_epoch) {
  cfg.validate();
  nn::check_params(init, arch);
  if (train_set.size() == 0) fail(ErrorCode::kEmptyCorpus, "training set is empty");
  if (val_set.size() == 0) fail(ErrorCode::kEmptyCorpus, "validation set is empty");

  TrainResult result{std::move(init), {}};
  auto& params = result.params;
  AdamState<float> adam;
  PlateauScheduler scheduler(cfg.plateau);
  int reductions = 0;

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  nn::ForwardCache<float> cache;

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    const double lr = cfg.adam.lr0 * std::pow(cfg.plateau.factor, reductions);
    Rng rng(derive_seed(cfg.seed, "shuffle", static_cast<std::uint64_t>(epoch)));
    rng.shuffle(std::span<std::size_t>(order));

    double loss_sum = 0.0;
    std::size_t correct = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const auto idx = std::span<const std::size_t>(order).subspan(
          start, std::min(cfg.batch_size, order.size() - start));
      const auto labels = batch_labels(train_set, idx);
      const auto logits =
          nn::model_forward(params, arch, train_set.batch(idx), nn::Mode::kTrain, &cache);
      const auto lg = nn::softmax_cross_entropy(logits, labels);
      loss_sum += lg.loss * static_cast<double>(idx.size());
      const std::size_t k = logits.dim(1);
      for (std::size_t i = 0; i < idx.size(); ++i) {
        if (argmax_class({logits.data() + i * k, k}) == labels[i]) ++correct;
      }
      const auto grads = nn::model_backward(params, arch, cache, lg.grad_logits);
      adam_step(params.tensors, grads.tensors, adam, lr, cfg.adam);
    }

    EpochLog row;
    row.epoch = epoch;
    row.lr = lr;
    row.train_loss = loss_sum / static_cast<double>(order.size());
    row.train_acc = static_cast<double>(correct) / static_cast<double>(order.size());
    row.val_acc = evaluate(params, arch, val_set).accuracy;
    result.log.push_back(row);
    if (on_epoch) on_epoch(row);
    if (scheduler.observe(row.val_acc)) ++reductions;
    if (cfg.stop_at_train_acc && row.train_acc >= *cfg.stop_at_train_acc) break;
  }
  return result;
}

CsvTable training_log_csv(std::span<const EpochLog> log) {
  CsvTable t;
  t.header = {"epoch", "lr", "train_loss", "train_acc", "val_acc"};
  for (const auto& e : log) {
    char lr[32];
    std::snprintf(lr, sizeof lr, "%.6g", e.lr);
    t.rows.push_back({std::to_string(e.epoch), lr, format_fixed6(e.train_loss),
                      format_fixed6(e.train_acc), format_fixed6(e.val_acc)});
  }
  return t;
}

int argmax_class(std::span<const float> logits) {
  int best = 0;
  for (std::size_t c = 1; c < logits.size(); ++c) {
    if (logits[c] > logits[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
  }
  return best;
}

std::vector<int> predict(const nn::ModelParams<float>& params, const nn::ArchSpec& arch,
                         const FeatureSet& set) {
  // Inference is per-example, so chunking only bounds memory.
  constexpr std::size_t kChunk = 64;
  std::vector<int> out;
  out.reserve(set.size());
  std::vector<std::size_t> idx;
  for (std::size_t start = 0; start < set.size(); start += kChunk) {
    idx.resize(std::min(kChunk, set.size() - start));
    std::iota(idx.begin(), idx.end(), start);
    const auto logits = nn::model_forward(params, arch, set.batch(idx));
    const std::size_t k = logits.dim(1);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      out.push_back(argmax_class({logits.data() + i * k, k}));
    }
  }
  return out;
}

EvalRow accuracy_row(std::span<const int> predictions, std::span<const int> labels) {
  if (predictions.size() != labels.size()) {
    fail(ErrorCode::kShapeMismatch, "prediction count disagrees with label count");
  }
  if (labels.empty()) fail(ErrorCode::kEmptyCorpus, "evaluation set is empty");
  EvalRow row;
  row.n_examples = labels.size();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (predictions[i] == labels[i]) ++row.correct;
  }
  row.accuracy = static_cast<double>(row.correct) / static_cast<double>(row.n_examples);
  return row;
}

EvalRow evaluate(const nn::ModelParams<float>& params, const nn::ArchSpec& arch,
                 const FeatureSet& eval_set, const std::string& model_id,
                 const std::string& noise_source, std::optional<int> snr_db) {
  const auto predictions = predict(params, arch, eval_set);
  EvalRow row = accuracy_row(predictions, eval_set.labels);
  row.model_id = model_id;
  row.noise_source = noise_source;
  row.snr_db = snr_db;
  return row;
}

CsvTable eval_report_csv(std::span<const EvalRow> rows) {
  CsvTable t;
  t.header = {"model_id", "noise_source", "snr_db", "accuracy", "n_examples"};
  for (const auto& r : rows) {
    t.rows.push_back({r.model_id, r.noise_source, r.snr_db ? std::to_string(*r.snr_db) : "",
                      format_fixed6(r.accuracy), std::to_string(r.n_examples)});
  }
  return t;
}

bool is_noise_aware_fraction(double fraction) {
  return std::any_of(std::begin(kNoiseAwareFractions), std::end(kNoiseAwareFractions),
                     [fraction](double f) { return std::abs(f - fraction) < 1e-9; });
}

NoiseAwareMix NoiseAwareMix::standard(double fraction) {
  NoiseAwareMix mix;
  mix.extra_fraction = fraction;
  mix.pool = data::condition_pool(data::kPretrainSources);
  return mix;
}

void NoiseAwareMix::validate() const {
  if (!is_noise_aware_fraction(extra_fraction)) {
    fail(ErrorCode::kConfigInvalid, "noise-aware fraction must be one of 0.2, 0.4, 0.6, 0.8, 1.0");
  }
  if (pool.empty()) fail(ErrorCode::kConfigInvalid, "noise-aware pool is empty");
}

namespace {

std::uint64_t split_seed(std::uint64_t seed, data::Split split) {
  return derive_seed(seed, "split", static_cast<std::uint64_t>(split));
}

}  // namespace

FeatureSet clean_features(const DataInputs& in, data::Split split, std::uint64_t seed) {
  const auto specs = data::balanced_clean_split(in.index, split, in.profile, split_seed(seed, split));
  return featurize(specs, in.loader, in.frontend);
}

FeatureSet condition_features(const DataInputs& in, data::Split split,
                              const data::NoiseCondition& cond, std::uint64_t data_seed) {
  const auto seed = derive_seed(split_seed(data_seed, split), "condition-" + cond.source,
                                static_cast<std::uint64_t>(cond.snr_db + 1000));
  const auto specs = data::build_noisy_set(in.index, split, cond, 1.0, seed, in.profile);
  return featurize(specs, in.loader, in.frontend);
}

TrainResult build_baseline(const DataInputs& in, const nn::ArchSpec& arch,
                           const TrainConfig& cfg, const EpochCallback& on_epoch) {
  const auto train_set = clean_features(in, data::Split::kTrain, cfg.seed);
  const auto val_set = clean_features(in, data::Split::kVal, cfg.seed);
  return train_model(arch, train_set, val_set, cfg, on_epoch);
}

TrainResult build_noise_aware(const DataInputs& in, const nn::ArchSpec& arch,
                              const NoiseAwareMix& mix, const TrainConfig& cfg,
                              const EpochCallback& on_epoch) {
  mix.validate();
  auto train_set = clean_features(in, data::Split::kTrain, cfg.seed);
  const auto noisy = data::build_noisy_set(
      in.index, data::Split::kTrain, mix.pool, mix.extra_fraction,
      split_seed(cfg.seed, data::Split::kTrain), in.profile);
  train_set.append(featurize(noisy, in.loader, in.frontend));
  const auto val_set = clean_features(in, data::Split::kVal, cfg.seed);
  return train_model(arch, train_set, val_set, cfg, on_epoch);
}

}  // namespace nkws::train
