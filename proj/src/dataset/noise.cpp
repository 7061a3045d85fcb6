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

#include "dataset/noise.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "common/error.hpp"
#include "common/rng.hpp"

namespace nkws::data {

bool on_snr_grid(int snr_db) {
  return std::find(kSnrGrid.begin(), kSnrGrid.end(), snr_db) != kSnrGrid.end();
}

NoiseCondition make_condition(std::string source, int snr_db) {
  const auto known = [&source](std::span<const std::string_view> group) {
    return std::find(group.begin(), group.end(), source) != group.end();
  };
  if (!known(kPretrainSources) && !known(kOnSiteSources)) {
    fail(ErrorCode::kConfigInvalid, "unknown noise source '" + source + "'");
  }
  if (!on_snr_grid(snr_db)) {
    fail(ErrorCode::kConfigInvalid,
         "SNR " + std::to_string(snr_db) + " dB is not on the -3..24 dB grid");
  }
  return NoiseCondition{std::move(source), snr_db};
}

bool is_generated_source(std::string_view source) {
  return source == "white" || source == "pink";
}

double signal_power(std::span<const float> samples) {
  if (samples.empty()) return 0.0;
  double acc = 0.0;
  for (float s : samples) acc += static_cast<double>(s) * static_cast<double>(s);
  return acc / static_cast<double>(samples.size());
}

AudioClip white_noise(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  AudioClip clip;
  clip.samples.resize(n);
  for (auto& s : clip.samples) s = static_cast<float>(0.25 * rng.normal());
  return clip;
}

AudioClip pink_noise(std::size_t n, std::uint64_t seed) {
  constexpr int kRows = 16;
  Rng rng(seed);
  std::array<double, kRows> rows{};
  double running = 0.0;
  for (auto& r : rows) {
    r = rng.uniform(-1.0, 1.0);
    running += r;
  }
  AudioClip clip;
  clip.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Row k is refreshed whenever bit k is the lowest set bit of the counter.
    const std::uint64_t counter = i + 1;
    const int k = std::min(kRows - 1, std::countr_zero(counter));
    running -= rows[static_cast<std::size_t>(k)];
    rows[static_cast<std::size_t>(k)] = rng.uniform(-1.0, 1.0);
    running += rows[static_cast<std::size_t>(k)];
    const double white = rng.uniform(-1.0, 1.0);
    clip.samples[i] = static_cast<float>((running + white) / (kRows + 1));
  }
  return clip;
}

std::vector<AudioClip> extract_silence(const AudioClip& source,
                                       std::uint64_t seed, std::size_t count) {
  const std::size_t len = dsp::kClipSamples;
  if (source.samples.size() < len) {
    fail(ErrorCode::kSourceTooShort,
         "background recording has " + std::to_string(source.samples.size()) +
             " samples, need at least " + std::to_string(len));
  }
  Rng rng(seed);
  std::vector<AudioClip> clips;
  clips.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t offset = rng.uniform_index(source.samples.size() - len + 1);
    AudioClip c;
    c.sample_rate_hz = source.sample_rate_hz;
    c.samples.assign(source.samples.begin() + static_cast<std::ptrdiff_t>(offset),
                     source.samples.begin() + static_cast<std::ptrdiff_t>(offset + len));
    clips.push_back(std::move(c));
  }
  return clips;
}

Mixture mix_at_snr_detailed(const AudioClip& clean, const AudioClip& noise,
                            double snr_db, std::uint64_t seed) {
  const std::size_t n = clean.samples.size();
  if (noise.samples.size() < n) {
    fail(ErrorCode::kSourceTooShort, "noise recording shorter than the clip");
  }
  Mixture out;
  if (noise.samples.size() > n) {
    Rng rng(seed);
    out.noise_offset = rng.uniform_index(noise.samples.size() - n + 1);
  }
  const std::span<const float> segment(noise.samples.data() + out.noise_offset, n);

  const double p_clean = signal_power(clean.samples);
  const double p_noise = signal_power(segment);
  if (!(p_clean > 0.0)) fail(ErrorCode::kZeroPowerSignal, "clean signal is silent");
  if (!(p_noise > 0.0)) fail(ErrorCode::kZeroPowerSignal, "noise segment is silent");

  out.noise_gain = std::sqrt(p_clean / (p_noise * std::pow(10.0, snr_db / 10.0)));
  out.mixed.sample_rate_hz = clean.sample_rate_hz;
  out.mixed.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.mixed.samples[i] = static_cast<float>(
        static_cast<double>(clean.samples[i]) +
        out.noise_gain * static_cast<double>(segment[i]));
  }
  return out;
}

AudioClip mix_at_snr(const AudioClip& clean, const AudioClip& noise,
                     double snr_db, std::uint64_t seed) {
  return mix_at_snr_detailed(clean, noise, snr_db, seed).mixed;
}

NoiseBank::NoiseBank(std::filesystem::path noise_dir) : dir_(std::move(noise_dir)) {}

bool NoiseBank::available(const std::string& source) const {
  return is_generated_source(source) ||
         std::filesystem::is_regular_file(dir_ / (source + ".wav"));
}

std::shared_ptr<const AudioClip> NoiseBank::recording(const std::string& source,
                                                      std::uint64_t seed) const {
  if (source == "white") {
    return std::make_shared<const AudioClip>(white_noise(dsp::kClipSamples, seed));
  }
  if (source == "pink") {
    return std::make_shared<const AudioClip>(pink_noise(dsp::kClipSamples, seed));
  }
  std::shared_ptr<const AudioClip> clip;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(source);
    if (it != cache_.end()) clip = it->second;
  }
  if (!clip) {
    const auto path = dir_ / (source + ".wav");
    if (!std::filesystem::is_regular_file(path)) {
      fail(ErrorCode::kIoError, "no recording for noise source '" + source +
                                    "' (expected " + path.string() + ")");
    }
    clip = std::make_shared<const AudioClip>(dsp::read_wav(path));
    std::lock_guard<std::mutex> lock(mutex_);
    cache_.emplace(source, clip);
  }
  return clip;
}

}  // namespace nkws::data
