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

#include "dataset/sets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "common/error.hpp"
#include "common/rng.hpp"
#include "dsp/frontend.hpp"

namespace nkws::data {

std::vector<int> DataProfile::active_classes() const {
  if (classes.empty()) {
    std::vector<int> all(kNumClasses);
    std::iota(all.begin(), all.end(), 0);
    return all;
  }
  std::vector<int> sorted = classes;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (int c : sorted) class_from_index(c);
  return sorted;
}

std::size_t DataProfile::cap(Split split) const {
  switch (split) {
    case Split::kTrain: return max_train_per_class;
    case Split::kVal: return max_val_per_class;
    case Split::kTest: return max_test_per_class;
  }
  return 0;
}

namespace {

// Seeded subset of size n that keeps the original relative order.
template <typename T>
std::vector<T> ordered_subset(const std::vector<T>& items, std::size_t n,
                              std::uint64_t seed) {
  if (n >= items.size()) return items;
  std::vector<std::size_t> idx(items.size());
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(idx));
  idx.resize(n);
  std::sort(idx.begin(), idx.end());
  std::vector<T> out;
  out.reserve(n);
  for (std::size_t i : idx) out.push_back(items[i]);
  return out;
}

std::size_t apply_cap(std::size_t n, std::size_t cap) {
  return cap == 0 ? n : std::min(n, cap);
}

std::map<int, std::vector<ExampleSpec>> group_by_class(
    const std::vector<ExampleSpec>& examples) {
  std::map<int, std::vector<ExampleSpec>> groups;
  for (const auto& e : examples) groups[e.label.index].push_back(e);
  return groups;
}

// Spreads n over classes as evenly as their availability allows.
std::map<int, std::size_t> balanced_quotas(
    const std::map<int, std::vector<ExampleSpec>>& groups, std::size_t n) {
  std::map<int, std::size_t> quota;
  for (const auto& [c, items] : groups) quota[c] = 0;
  while (n > 0) {
    bool progressed = false;
    for (auto& [c, q] : quota) {
      if (n == 0) break;
      if (q < groups.at(c).size()) {
        ++q;
        --n;
        progressed = true;
      }
    }
    if (!progressed) break;
  }
  return quota;
}

}  // namespace

std::vector<ExampleSpec> balanced_clean_split(const CorpusIndex& index,
                                              Split split,
                                              const DataProfile& profile,
                                              std::uint64_t seed) {
  const std::vector<int> active = profile.active_classes();
  const std::size_t cap = profile.cap(split);
  const auto is_active = [&](int c) {
    return std::binary_search(active.begin(), active.end(), c);
  };

  std::map<int, std::vector<ExampleSpec>> pools;
  for (const auto& e : index.entries) {
    if (e.split != split || !is_active(e.label.index)) continue;
    ExampleSpec spec;
    spec.path = e.path;
    spec.label = e.label;
    pools[e.label.index].push_back(std::move(spec));
  }
  if (is_active(kSilenceIndex)) {
    for (const auto& s : index.silence) {
      if (s.split != split) continue;
      ExampleSpec spec;
      spec.silence = true;
      spec.path = s.source;
      spec.silence_seed = s.seed;
      spec.label = ClassLabel{kSilenceIndex};
      pools[kSilenceIndex].push_back(std::move(spec));
    }
  }

  const auto tag = static_cast<std::uint64_t>(split) * 64;
  std::vector<ExampleSpec> out;
  std::size_t keyword_total = 0;
  std::size_t keyword_classes = 0;
  for (int c = 0; c < kUnknownIndex; ++c) {
    auto it = pools.find(c);
    if (it == pools.end()) continue;
    auto kept = ordered_subset(it->second, apply_cap(it->second.size(), cap),
                               derive_seed(seed, "balance", tag + static_cast<std::uint64_t>(c)));
    keyword_total += kept.size();
    ++keyword_classes;
    out.insert(out.end(), kept.begin(), kept.end());
  }

  std::size_t target = cap;
  if (keyword_classes > 0) {
    target = static_cast<std::size_t>(std::llround(
        static_cast<double>(keyword_total) / static_cast<double>(keyword_classes)));
  }
  for (int c : {kUnknownIndex, kSilenceIndex}) {
    auto it = pools.find(c);
    if (it == pools.end()) continue;
    const std::size_t n =
        apply_cap(target == 0 ? it->second.size() : std::min(target, it->second.size()), cap);
    auto kept = ordered_subset(it->second, n,
                               derive_seed(seed, "balance", tag + static_cast<std::uint64_t>(c)));
    out.insert(out.end(), kept.begin(), kept.end());
  }
  return out;
}

std::vector<ExampleSpec> build_noisy_set(const CorpusIndex& index, Split split,
                                         std::span<const NoiseCondition> pool,
                                         double fraction, std::uint64_t seed,
                                         const DataProfile& profile) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    fail(ErrorCode::kConfigInvalid, "noisy-set fraction must be in (0, 1]");
  }
  if (pool.empty()) fail(ErrorCode::kConfigInvalid, "empty noise-condition pool");

  const auto base = balanced_clean_split(index, split, profile, seed);
  const auto n = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(base.size())));
  const auto groups = group_by_class(base);
  const auto quotas = balanced_quotas(groups, n);

  std::vector<ExampleSpec> chosen;
  chosen.reserve(n);
  for (const auto& [c, items] : groups) {
    auto kept = ordered_subset(items, quotas.at(c),
                               derive_seed(seed, "noisy-pick", static_cast<std::uint64_t>(c)));
    chosen.insert(chosen.end(), kept.begin(), kept.end());
  }
  Rng rng(derive_seed(seed, "noisy-order"));
  rng.shuffle(std::span<ExampleSpec>(chosen));
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    const auto& cond = pool[i % pool.size()];
    chosen[i].noise_source = cond.source;
    chosen[i].snr_db = cond.snr_db;
    chosen[i].mix_seed = derive_seed(seed, "mix", i);
  }
  return chosen;
}

std::vector<ExampleSpec> build_noisy_set(const CorpusIndex& index, Split split,
                                         const NoiseCondition& cond,
                                         double fraction, std::uint64_t seed,
                                         const DataProfile& profile) {
  return build_noisy_set(index, split, std::span<const NoiseCondition>(&cond, 1),
                         fraction, seed, profile);
}

ShotSet sample_shots(const CorpusIndex& index, const NoiseCondition& cond,
                     int k, std::uint64_t seed, const DataProfile& profile) {
  if (k < 1 || k > 5) {
    fail(ErrorCode::kConfigInvalid,
         "shots per class must be in 1..5, got " + std::to_string(k));
  }
  const auto train = balanced_clean_split(index, Split::kTrain, profile, seed);
  const auto groups = group_by_class(train);

  ShotSet shots;
  shots.shots_per_class = k;
  shots.condition = cond;
  for (int c : profile.active_classes()) {
    auto it = groups.find(c);
    const std::size_t have = it == groups.end() ? 0 : it->second.size();
    if (have < static_cast<std::size_t>(k)) {
      fail(ErrorCode::kInsufficientSamples,
           "class " + std::string(kClassNames[static_cast<std::size_t>(c)]) +
               " has " + std::to_string(have) + " training examples, need " +
               std::to_string(k));
    }
    std::vector<ExampleSpec> pool = it->second;
    Rng rng(derive_seed(seed, "shots", static_cast<std::uint64_t>(c)));
    rng.shuffle(std::span<ExampleSpec>(pool));
    for (int i = 0; i < k; ++i) {
      ExampleSpec spec = pool[static_cast<std::size_t>(i)];
      spec.noise_source = cond.source;
      spec.snr_db = cond.snr_db;
      spec.mix_seed = derive_seed(seed, "shot-mix", shots.items.size());
      shots.items.push_back(std::move(spec));
    }
  }
  return shots;
}

std::vector<NoiseCondition> condition_pool(
    std::span<const std::string_view> sources) {
  std::vector<NoiseCondition> pool;
  for (auto s : sources) {
    for (int snr : kSnrGrid) pool.push_back({std::string(s), snr});
  }
  return pool;
}

CsvTable examples_manifest(std::span<const ExampleSpec> examples, Split split) {
  CsvTable table;
  table.header = kManifestHeader;
  for (const auto& e : examples) {
    const std::string word =
        e.silence ? std::string(kSilenceToken) : e.path.substr(0, e.path.find('/'));
    std::string seed;
    if (e.noisy()) {
      seed = std::to_string(e.mix_seed);
    } else if (e.silence) {
      seed = std::to_string(e.silence_seed);
    }
    table.rows.push_back({e.path, word, std::to_string(e.label.index),
                          std::string(split_name(split)), e.noise_source,
                          e.noisy() ? std::to_string(e.snr_db) : "", seed});
  }
  return table;
}

ClipLoader::ClipLoader(std::filesystem::path root,
                       std::shared_ptr<const NoiseBank> bank)
    : root_(std::move(root)), bank_(std::move(bank)) {}

std::shared_ptr<const AudioClip> ClipLoader::background(
    const std::string& path) const {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = backgrounds_.find(path);
    if (it != backgrounds_.end()) return it->second;
  }
  auto clip = std::make_shared<const AudioClip>(dsp::read_wav(root_ / path));
  std::lock_guard<std::mutex> lock(mutex_);
  backgrounds_.emplace(path, clip);
  return clip;
}

AudioClip ClipLoader::load(const ExampleSpec& spec) const {
  AudioClip clean;
  if (spec.silence) {
    clean = extract_silence(*background(spec.path), spec.silence_seed, 1).front();
  } else {
    clean = dsp::pad_or_trim(dsp::read_wav(root_ / spec.path), dsp::kClipSamples);
  }
  if (!spec.noisy()) return clean;
  // A silent recording has no defined SNR; it is used unmixed.
  if (signal_power(clean.samples) == 0.0) return clean;
  if (!bank_) fail(ErrorCode::kConfigInvalid, "noisy example but no noise bank");
  const auto noise = bank_->recording(spec.noise_source, spec.mix_seed);
  return mix_at_snr(clean, *noise, spec.snr_db, spec.mix_seed);
}

}  // namespace nkws::data
