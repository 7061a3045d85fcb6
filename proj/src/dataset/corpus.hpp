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

#ifndef NOISEKWS_DATASET_CORPUS_HPP_
#define NOISEKWS_DATASET_CORPUS_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "common/csv.hpp"
#include "dataset/labels.hpp"

namespace nkws::data {

enum class Split { kTrain, kVal, kTest };

std::string_view split_name(Split split);
Split parse_split(std::string_view name);

inline constexpr std::string_view kBackgroundNoiseDir = "_background_noise_";

struct CorpusEntry {
  std::string path;  // relative to the corpus root, '/' separated
  std::string word;
  ClassLabel label;
  Split split = Split::kTrain;
};

// A Silence example: a one-second window of a background recording, located
// by a seed.
struct SilenceEntry {
  std::string source;  // relative path of the background recording
  Split split = Split::kTrain;
  std::uint64_t seed = 0;
};

struct CorpusIndex {
  std::filesystem::path root;
  std::vector<CorpusEntry> entries;
  std::vector<std::string> silence_sources;
  std::vector<SilenceEntry> silence;

  std::size_t count(Split split) const;
};

// Walks a Speech Commands v2 tree. Paths listed in val_list/test_list go to
// those splits, everything else to train. Throws MissingListFile,
// MissingBackgroundNoise, UnknownWord or EmptyCorpus.
CorpusIndex scan_corpus(const std::filesystem::path& root,
                        const std::filesystem::path& val_list,
                        const std::filesystem::path& test_list);

// Conventional list locations inside the corpus root.
CorpusIndex scan_corpus(const std::filesystem::path& root);

// Adds Silence entries so each split holds as many Silence examples as the
// average keyword class of that split. Replaces any existing ones.
void add_silence_entries(CorpusIndex& index, std::uint64_t seed);

// Manifest CSV: path,word,class_index,split,noise_source,snr_db,seed.
// Utterances leave the last three columns empty; Silence rows carry the
// extraction seed.
CsvTable corpus_manifest(const CorpusIndex& index);
CorpusIndex index_from_manifest(const CsvTable& table,
                                const std::filesystem::path& root);

extern const CsvRow kManifestHeader;

}  // namespace nkws::data

#endif  // NOISEKWS_DATASET_CORPUS_HPP_
