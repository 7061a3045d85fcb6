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

#ifndef NOISEKWS_DATASET_SETS_HPP_
#define NOISEKWS_DATASET_SETS_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "common/csv.hpp"
#include "dataset/corpus.hpp"
#include "dataset/noise.hpp"

namespace nkws::data {

// Restricts which classes take part and how many examples each class may
// contribute per split. Zero caps mean unlimited.
struct DataProfile {
  std::vector<int> classes;  // empty selects all twelve
  std::size_t max_train_per_class = 0;
  std::size_t max_val_per_class = 0;
  std::size_t max_test_per_class = 0;

  std::vector<int> active_classes() const;
  std::size_t cap(Split split) const;
};

// Recipe for one example: where the clean audio comes from and, optionally,
// the noise condition and seed it is mixed with.
struct ExampleSpec {
  bool silence = false;
  std::string path;
  std::uint64_t silence_seed = 0;
  ClassLabel label;
  std::string noise_source;  // empty for clean examples
  int snr_db = 0;
  std::uint64_t mix_seed = 0;

  bool noisy() const { return !noise_source.empty(); }
  auto operator<=>(const ExampleSpec&) const = default;
};

// Class-balanced clean examples of one split: keywords as indexed (capped),
// Unknown downsampled to the average keyword count, Silence trimmed likewise.
std::vector<ExampleSpec> balanced_clean_split(const CorpusIndex& index,
                                              Split split,
                                              const DataProfile& profile,
                                              std::uint64_t seed);

// round(fraction * |split|) examples, class counts within one of each other,
// each mixed at cond.
std::vector<ExampleSpec> build_noisy_set(const CorpusIndex& index, Split split,
                                         const NoiseCondition& cond,
                                         double fraction, std::uint64_t seed,
                                         const DataProfile& profile = {});

// Multi-condition variant: the subset is spread over pool so that every
// condition receives the same number of examples, within one.
std::vector<ExampleSpec> build_noisy_set(const CorpusIndex& index, Split split,
                                         std::span<const NoiseCondition> pool,
                                         double fraction, std::uint64_t seed,
                                         const DataProfile& profile = {});

struct ShotSet {
  int shots_per_class = 0;
  NoiseCondition condition;
  std::vector<ExampleSpec> items;
};

// k training examples per active class, each mixed at cond. Throws
// InsufficientSamples or ConfigInvalid (k outside 1..5).
ShotSet sample_shots(const CorpusIndex& index, const NoiseCondition& cond,
                     int k, std::uint64_t seed, const DataProfile& profile = {});

// Every source crossed with the full SNR grid.
std::vector<NoiseCondition> condition_pool(
    std::span<const std::string_view> sources);

// path,word,class_index,split,noise_source,snr_db,seed rows for a set.
CsvTable examples_manifest(std::span<const ExampleSpec> examples, Split split);

// Materializes audio for ExampleSpecs. Thread-safe.
class ClipLoader {
 public:
  ClipLoader(std::filesystem::path root, std::shared_ptr<const NoiseBank> bank);

  AudioClip load(const ExampleSpec& spec) const;
  const std::filesystem::path& root() const { return root_; }

 private:
  std::shared_ptr<const AudioClip> background(const std::string& path) const;

  std::filesystem::path root_;
  std::shared_ptr<const NoiseBank> bank_;
  mutable std::mutex mutex_;
  mutable std::map<std::string, std::shared_ptr<const AudioClip>> backgrounds_;
};

}  // namespace nkws::data

#endif  // NOISEKWS_DATASET_SETS_HPP_
