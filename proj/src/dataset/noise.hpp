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

#ifndef NOISEKWS_DATASET_NOISE_HPP_
#define NOISEKWS_DATASET_NOISE_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dsp/wav.hpp"

namespace nkws::data {

using dsp::AudioClip;

inline constexpr std::array<int, 10> kSnrGrid = {-3, 0, 3, 6, 9, 12, 15, 18, 21, 24};

// Sources mixed into the noise-aware pretraining pool.
inline constexpr std::array<std::string_view, 6> kPretrainSources = {
    "white", "pink", "babble", "office", "kitchen", "living_room"};
// Sources reserved for on-site adaptation.
inline constexpr std::array<std::string_view, 3> kOnSiteSources = {
    "car_horn", "dog_bark", "street_music"};

struct NoiseCondition {
  std::string source;
  int snr_db = 0;

  auto operator<=>(const NoiseCondition&) const = default;
};

bool on_snr_grid(int snr_db);
// Throws ConfigInvalid when snr_db is off the grid or the source is empty.
NoiseCondition make_condition(std::string source, int snr_db);
bool is_generated_source(std::string_view source);

// Mean of squares, accumulated in double.
double signal_power(std::span<const float> samples);

// Seeded colored noise, unit-variance before scaling to [-1, 1] range.
AudioClip white_noise(std::size_t n, std::uint64_t seed);
// Voss-McCartney with 16 octave rows.
AudioClip pink_noise(std::size_t n, std::uint64_t seed);

// count one-second windows at seeded uniform offsets. Throws SourceTooShort.
std::vector<AudioClip> extract_silence(const AudioClip& source,
                                       std::uint64_t seed, std::size_t count);

struct Mixture {
  AudioClip mixed;
  double noise_gain = 0.0;
  std::size_t noise_offset = 0;
};

// clean + gain * noise with gain chosen so that the clean-to-scaled-noise
// power ratio equals snr_db. Longer noise recordings contribute a seeded
// random segment of the clean length. No clipping is applied. Throws
// ZeroPowerSignal or SourceTooShort.
Mixture mix_at_snr_detailed(const AudioClip& clean, const AudioClip& noise,
                            double snr_db, std::uint64_t seed);
AudioClip mix_at_snr(const AudioClip& clean, const AudioClip& noise,
                     double snr_db, std::uint64_t seed);

// Noise recordings by source name. "white" and "pink" are generated per seed;
// everything else is read from <noise_dir>/<source>.wav and cached.
class NoiseBank {
 public:
  explicit NoiseBank(std::filesystem::path noise_dir);

  // Recording to mix from. Generated sources yield a fresh one-second clip
  // for each seed; file sources ignore the seed.
  std::shared_ptr<const AudioClip> recording(const std::string& source,
                                             std::uint64_t seed) const;
  bool available(const std::string& source) const;
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  mutable std::mutex mutex_;
  mutable std::map<std::string, std::shared_ptr<const AudioClip>> cache_;
};

}  // namespace nkws::data

#endif  // NOISEKWS_DATASET_NOISE_HPP_
