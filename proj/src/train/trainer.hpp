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

#ifndef NOISEKWS_TRAIN_TRAINER_HPP_
#define NOISEKWS_TRAIN_TRAINER_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "common/csv.hpp"
#include "dataset/corpus.hpp"
#include "dataset/sets.hpp"
#include "dsp/frontend.hpp"
#include "nn/model.hpp"
#include "train/adam.hpp"
#include "train/scheduler.hpp"

namespace nkws::train {

struct TrainConfig {
  AdamConfig adam;
  std::size_t batch_size = 16;
  int max_epochs = 50;
  PlateauConfig plateau;
  std::uint64_t seed = 1;
  // Ends training after the first epoch whose training accuracy reaches it.
  std::optional<double> stop_at_train_acc;

  void validate() const;
};

// Spectrograms stacked as [N][1][rows][cols] with their class indices.
struct FeatureSet {
  std::size_t rows = dsp::kFrames;
  std::size_t cols = dsp::kMels;
  std::vector<float> data;
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
  std::size_t example_size() const { return rows * cols; }
  std::span<const float> example(std::size_t i) const {
    return {data.data() + i * example_size(), example_size()};
  }
  void append(const dsp::Spectrogram& spec, int label);
  void append(const FeatureSet& other);
  nn::Tensor<float> batch(std::span<const std::size_t> indices) const;
  nn::Tensor<float> all() const;
};

FeatureSet featurize(std::span<const data::ExampleSpec> examples, const data::ClipLoader& loader,
                     const dsp::LogMelFrontend& frontend);

struct EpochLog {
  int epoch = 0;
  double lr = 0.0;
  double train_loss = 0.0;
  double train_acc = 0.0;
  double val_acc = 0.0;
};

struct TrainResult {
  nn::ModelParams<float> params;
  std::vector<EpochLog> log;
};

using EpochCallback = std::function<void(const EpochLog&)>;

// cfg.max_epochs epochs (fewer with stop_at_train_acc) of shuffled mini-batch
// Adam with batch norm in train mode; the plateau scheduler watches validation
// accuracy. Fully determined by cfg.seed.
TrainResult train_model(const nn::ArchSpec& arch, const FeatureSet& train_set,
                        const FeatureSet& val_set, const TrainConfig& cfg,
                        const EpochCallback& on_epoch = {});

// Same loop from given starting weights.
TrainResult train_model(const nn::ArchSpec& arch, nn::ModelParams<float> init,
                        const FeatureSet& train_set, const FeatureSet& val_set,
                        const TrainConfig& cfg, const EpochCallback& on_epoch = {});

inline constexpr const char* kTrainingLogHeader = "epoch,lr,train_loss,train_acc,val_acc";
CsvTable training_log_csv(std::span<const EpochLog> log);

// Index of the largest logit; ties go to the lowest index.
int argmax_class(std::span<const float> logits);

std::vector<int> predict(const nn::ModelParams<float>& params, const nn::ArchSpec& arch,
                         const FeatureSet& set);

struct EvalRow {
  std::string model_id;
  std::string noise_source = "clean";
  std::optional<int> snr_db;
  double accuracy = 0.0;
  std::size_t correct = 0;
  std::size_t n_examples = 0;
};

// Top-1 accuracy with batch norm in infer mode.
EvalRow evaluate(const nn::ModelParams<float>& params, const nn::ArchSpec& arch,
                 const FeatureSet& eval_set, const std::string& model_id = "model",
                 const std::string& noise_source = "clean",
                 std::optional<int> snr_db = std::nullopt);

EvalRow accuracy_row(std::span<const int> predictions, std::span<const int> labels);

inline constexpr const char* kEvalReportHeader =
    "model_id,noise_source,snr_db,accuracy,n_examples";
CsvTable eval_report_csv(std::span<const EvalRow> rows);

inline constexpr double kNoiseAwareFractions[] = {0.2, 0.4, 0.6, 0.8, 1.0};

struct NoiseAwareMix {
  double extra_fraction = 1.0;
  std::vector<data::NoiseCondition> pool;

  // The six pretraining sources crossed with the SNR grid.
  static NoiseAwareMix standard(double fraction);
  void validate() const;
};

bool is_noise_aware_fraction(double fraction);

// Where examples come from and how they are turned into features.
struct DataInputs {
  const data::CorpusIndex& index;
  const data::ClipLoader& loader;
  const dsp::LogMelFrontend& frontend;
  data::DataProfile profile;
};

// Clean, class-balanced examples of one split. The seed fixes the subset.
FeatureSet clean_features(const DataInputs& in, data::Split split, std::uint64_t seed);

// The whole balanced split mixed at cond. The mixtures depend only on
// (data_seed, cond), so every model is scored on identical audio.
FeatureSet condition_features(const DataInputs& in, data::Split split,
                              const data::NoiseCondition& cond, std::uint64_t data_seed);

TrainResult build_baseline(const DataInputs& in, const nn::ArchSpec& arch,
                           const TrainConfig& cfg, const EpochCallback& on_epoch = {});

// Clean training split plus a balanced noisy add-on of extra_fraction of its
// size, mixed once and shuffled jointly each epoch.
TrainResult build_noise_aware(const DataInputs& in, const nn::ArchSpec& arch,
                              const NoiseAwareMix& mix, const TrainConfig& cfg,
                              const EpochCallback& on_epoch = {});

}  // namespace nkws::train

#endif  // NOISEKWS_TRAIN_TRAINER_HPP_
