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

#include "dataset/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "common/error.hpp"
#include "common/kv_config.hpp"
#include "common/rng.hpp"

namespace nkws::data {

namespace fs = std::filesystem;

const CsvRow kManifestHeader = {"path",         "word",   "class_index", "split",
                                "noise_source", "snr_db", "seed"};

std::string_view split_name(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "train";
}

Split parse_split(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "val" || name == "validation") return Split::kVal;
  if (name == "test" || name == "testing") return Split::kTest;
  fail(ErrorCode::kConfigInvalid, "unknown split '" + std::string(name) + "'");
}

std::size_t CorpusIndex::count(Split split) const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(),
                    [split](const CorpusEntry& e) { return e.split == split; }));
}

namespace {

std::set<std::string> read_list(const fs::path& path) {
  if (!fs::is_regular_file(path)) {
    fail(ErrorCode::kMissingListFile, "list file not found: " + path.string());
  }
  std::ifstream in(path);
  std::set<std::string> items;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (!line.empty()) items.insert(line);
  }
  return items;
}

std::vector<fs::path> sorted_children(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

bool is_wav(const fs::path& p) {
  return fs::is_regular_file(p) && p.extension() == ".wav";
}

}  // namespace

CorpusIndex scan_corpus(const fs::path& root, const fs::path& val_list,
                        const fs::path& test_list) {
  if (!fs::is_directory(root)) {
    fail(ErrorCode::kIoError, "corpus root is not a directory: " + root.string());
  }
  const auto val = read_list(val_list);
  const auto test = read_list(test_list);

  CorpusIndex index;
  index.root = root;
  bool have_background = false;
  for (const auto& dir : sorted_children(root)) {
    if (!fs::is_directory(dir)) continue;
    const std::string name = dir.filename().string();
    if (name == kBackgroundNoiseDir) {
      have_background = true;
      for (const auto& f : sorted_children(dir)) {
        if (is_wav(f)) {
          index.silence_sources.push_back(name + "/" + f.filename().string());
        }
      }
      continue;
    }
    if (name.empty() || name[0] == '.' || name[0] == '_') continue;
    const ClassLabel label = assign_class(name);
    for (const auto& f : sorted_children(dir)) {
      if (!is_wav(f)) continue;
      CorpusEntry entry;
      entry.path = name + "/" + f.filename().string();
      entry.word = name;
      entry.label = label;
      if (test.count(entry.path)) {
        entry.split = Split::kTest;
      } else if (val.count(entry.path)) {
        entry.split = Split::kVal;
      }
      index.entries.push_back(std::move(entry));
    }
  }
  if (!have_background) {
    fail(ErrorCode::kMissingBackgroundNoise,
         "no " + std::string(kBackgroundNoiseDir) + " folder under " +
             root.string());
  }
  if (index.silence_sources.empty()) {
    fail(ErrorCode::kMissingBackgroundNoise,
         std::string(kBackgroundNoiseDir) + " holds no WAV recordings");
  }
  if (index.entries.empty()) {
    fail(ErrorCode::kEmptyCorpus, "no utterances found under " + root.string());
  }
  return index;
}

CorpusIndex scan_corpus(const fs::path& root) {
  return scan_corpus(root, root / "validation_list.txt",
                     root / "testing_list.txt");
}

void add_silence_entries(CorpusIndex& index, std::uint64_t seed) {
  index.silence.clear();
  if (index.silence_sources.empty()) {
    fail(ErrorCode::kMissingBackgroundNoise, "no background recordings indexed");
  }
  for (Split split : {Split::kTrain, Split::kVal, Split::kTest}) {
    std::size_t keyword_total = 0;
    for (const auto& e : index.entries) {
      if (e.split == split && e.label.index < kUnknownIndex) ++keyword_total;
    }
    const auto target = static_cast<std::size_t>(
        std::llround(static_cast<double>(keyword_total) / kUnknownIndex));
    Rng rng(derive_seed(seed, "silence", static_cast<std::uint64_t>(split)));
    for (std::size_t i = 0; i < target; ++i) {
      SilenceEntry s;
      s.source = index.silence_sources[rng.uniform_index(index.silence_sources.size())];
      s.split = split;
      s.seed = rng.next_u64() >> 1;  // keep it representable as int64 in CSV
      index.silence.push_back(std::move(s));
    }
  }
}

CsvTable corpus_manifest(const CorpusIndex& index) {
  CsvTable table;
  table.header = kManifestHeader;
  for (const auto& e : index.entries) {
    table.rows.push_back({e.path, e.word, std::to_string(e.label.index),
                          std::string(split_name(e.split)), "", "", ""});
  }
  for (const auto& s : index.silence) {
    table.rows.push_back({s.source, std::string(kSilenceToken),
                          std::to_string(kSilenceIndex),
                          std::string(split_name(s.split)), "", "",
                          std::to_string(s.seed)});
  }
  return table;
}

CorpusIndex index_from_manifest(const CsvTable& table, const fs::path& root) {
  const std::size_t c_path = table.column("path");
  const std::size_t c_word = table.column("word");
  const std::size_t c_class = table.column("class_index");
  const std::size_t c_split = table.column("split");
  const std::size_t c_seed = table.column("seed");

  CorpusIndex index;
  index.root = root;
  std::set<std::string> sources;
  for (const auto& row : table.rows) {
    const ClassLabel label =
        class_from_index(static_cast<int>(parse_int(row[c_class], "class_index")));
    const Split split = parse_split(row[c_split]);
    if (row[c_word] == kSilenceToken) {
      SilenceEntry s;
      s.source = row[c_path];
      s.split = split;
      s.seed = static_cast<std::uint64_t>(parse_int(row[c_seed], "seed"));
      sources.insert(s.source);
      index.silence.push_back(std::move(s));
      continue;
    }
    if (assign_class(row[c_word]) != label) {
      fail(ErrorCode::kConfigInvalid,
           "manifest label disagrees with word for " + row[c_path]);
    }
    index.entries.push_back({row[c_path], row[c_word], label, split});
  }
  index.silence_sources.assign(sources.begin(), sources.end());
  if (index.entries.empty()) fail(ErrorCode::kEmptyCorpus, "manifest has no utterances");
  return index;
}

}  // namespace nkws::data
