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

#ifndef NOISEKWS_DSP_WAV_HPP_
#define NOISEKWS_DSP_WAV_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace nkws::dsp {

inline constexpr int kSampleRateHz = 16000;
inline constexpr std::size_t kClipSamples = 16000;

// Mono waveform with samples nominally in [-1, 1].
struct AudioClip {
  std::vector<float> samples;
  int sample_rate_hz = kSampleRateHz;
};

// RIFF/WAVE, 16-bit PCM, mono, 16 kHz only. Samples are scaled by 1/32768.
// Throws UnsupportedFormat for other encodings and CorruptHeader for
// malformed containers.
AudioClip decode_wav(std::span<const std::uint8_t> bytes);
AudioClip read_wav(const std::filesystem::path& path);

// 16-bit PCM mono; samples are clamped to the representable range.
std::vector<std::uint8_t> encode_wav(const AudioClip& clip);
void write_wav(const std::filesystem::path& path, const AudioClip& clip);

}  // namespace nkws::dsp

#endif  // NOISEKWS_DSP_WAV_HPP_
