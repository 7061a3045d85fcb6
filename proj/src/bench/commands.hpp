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

#ifndef NOISEKWS_BENCH_COMMANDS_HPP_
#define NOISEKWS_BENCH_COMMANDS_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bench/figure_table.hpp"
#include "bench/profile.hpp"
#include "dataset/corpus.hpp"
#include "dataset/noise.hpp"
#include "dataset/synth.hpp"
#include "train/trainer.hpp"

namespace nkws::bench {

// Shared state of one CLI invocation.
struct Context {
  std::filesystem::path data_root;
  // Empty: <data_root>/_noise_sources_.
  std::filesystem::path noise_dir;
  // Prepared corpus manifest. Empty: scan data_root.
  std::filesystem::path manifest;
  Profile profile = Profile::desk();
  std::uint64_t seed = 1;
  std::vector<std::string> args;
  std::function<void(const std::string&)> log;

  std::filesystem::path resolved_noise_dir() const;
  void info(const std::string& message) const;
};

inline constexpr const char* kDefaultNoiseDirName = "_noise_sources_";

// Corpus index from ctx.manifest, or a fresh scan plus silence entries.
data::CorpusIndex load_index(const Context& ctx);

// Scans the corpus and writes its split/label manifest. Returns the row count.
std::size_t cmd_prepare(const Context& ctx, const std::filesystem::path& out_manifest);

enum class ModelKind { kBaseline, kNoiseAware };

ModelKind parse_model_kind(std::string_view name);
std::string model_id(ModelKind kind, std::optional<double> fraction);

struct PretrainSummary {
  std::string model_id;
  double final_val_acc = 0.0;
  int epochs = 0;
};

// Trains and writes <out>, <out>.log.csv and <out>.manifest.json. Throws
// Usage when fraction is missing for noise-aware, present for baseline, or
// off the 0.2..1.0 grid.
PretrainSummary cmd_pretrain(const Context& ctx, ModelKind kind, std::optional<double> fraction,
                             const std::filesystem::path& out_weights);

struct AdaptRequest {
  std::filesystem::path weights;
  std::string source;
  int snr_db = 0;
  int shots = 1;
  int epochs = 1;
  std::uint64_t seed = 1;
};

// Throws Usage for shots or epochs outside 1..5 and for conditions off grid.
void cmd_adapt(const Context& ctx, const AdaptRequest& request,
               const std::filesystem::path& out_weights);

// "clean", "<source>" (every grid SNR) or "<source>@<snr>", comma separated.
// nullopt stands for clean.
std::vector<std::optional<data::NoiseCondition>> parse_conditions(const std::string& text);

// One EvalReport row per condition on the test split.
std::vector<train::EvalRow> cmd_evaluate(
    const Context& ctx, const std::filesystem::path& weights,
    const std::vector<std::optional<data::NoiseCondition>>& conditions,
    const std::filesystem::path& out_csv);

struct ExperimentOptions {
  // Pretraining seeds for fig3/fig4, adaptation seeds for fig5/fig6. Empty
  // selects the profile default.
  std::vector<std::uint64_t> seeds;
  // Adaptation SNRs for fig6. Empty selects the profile default.
  std::vector<int> snrs;
  // Where pretrained models are cached. Empty: next to the output CSV.
  std::filesystem::path work_dir;
};

std::vector<FigureRow> cmd_experiment(const Context& ctx, const std::string& figure_id,
                                      const ExperimentOptions& options,
                                      const std::filesystem::path& out_csv);

// Synthetic corpus in the Speech Commands layout plus a noise directory.
void cmd_synth(const std::filesystem::path& root, const std::filesystem::path& noise_dir,
               const data::SynthCorpusConfig& cfg);

}  // namespace nkws::bench

#endif  // NOISEKWS_BENCH_COMMANDS_HPP_
