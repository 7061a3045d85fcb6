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

#ifndef NOISEKWS_DSP_FRONTEND_HPP_
#define NOISEKWS_DSP_FRONTEND_HPP_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <vector>

#include "dsp/wav.hpp"

namespace nkws::dsp {

inline constexpr std::size_t kFrames = 101;
inline constexpr std::size_t kMels = 64;

struct FrontendConfig {
  int sample_rate_hz = kSampleRateHz;
  double win_ms = 25.0;
  double hop_ms = 10.0;
  int n_mels = static_cast<int>(kMels);
  double f_min_hz = 50.0;
  double f_max_hz = 7500.0;
  int fft_size = 512;
  double log_floor = 1e-6;

  int win_length() const;  // 400 at 16 kHz
  int hop_length() const;  // 160 at 16 kHz
  int n_bins() const { return fft_size / 2 + 1; }

  // Throws ConfigInvalid.
  void validate() const;
};

// Row-major [rows][cols] float matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<float> values;

  float at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  std::span<const float> row(std::size_t r) const {
    return {values.data() + r * cols, cols};
  }
};

// Log-Mel image, [frames][mels].
using Spectrogram = Matrix;

// HTK mel scale.
double hz_to_mel(double hz);
double mel_to_hz(double mel);

// Zero-pads or truncates at the end.
AudioClip pad_or_trim(const AudioClip& clip, std::size_t target_len);

// Centered framing with reflect padding of fft_size/2, periodic Hann window of
// win_length zero-padded to fft_size, |X|^2 per frame. [frames][n_bins].
Matrix stft_power(const AudioClip& clip, const FrontendConfig& cfg);

// Triangular filters on equally spaced HTK-mel edges, no area normalization.
// [n_mels][n_bins].
Matrix mel_filterbank(const FrontendConfig& cfg);

// ln(filterbank * power + log_floor), [frames][n_mels].
Spectrogram log_mel(const AudioClip& clip, const FrontendConfig& cfg);

// Reusable frontend that keeps the window, filterbank and FFT plan. Safe to
// share across threads.
class LogMelFrontend {
 public:
  explicit LogMelFrontend(FrontendConfig cfg = {});
  ~LogMelFrontend();
  LogMelFrontend(const LogMelFrontend&) = delete;
  LogMelFrontend& operator=(const LogMelFrontend&) = delete;

  const FrontendConfig& config() const { return cfg_; }
  const Matrix& filterbank() const { return filterbank_; }

  Matrix power(const AudioClip& clip) const;
  Spectrogram compute(const AudioClip& clip) const;

 private:
  struct Plan;
  FrontendConfig cfg_;
  std::vector<double> window_;  // fft_size long, Hann centered
  Matrix filterbank_;
  std::unique_ptr<Plan> plan_;
};

// Debug dump: u32 rows, u32 cols (little-endian), then row-major f32 LE.
std::vector<std::uint8_t> encode_spectrogram(const Spectrogram& spec);
Spectrogram decode_spectrogram(std::span<const std::uint8_t> bytes);
void write_spectrogram(const std::filesystem::path& path,
                       const Spectrogram& spec);
Spectrogram read_spectrogram(const std::filesystem::path& path);

}  // namespace nkws::dsp

#endif  // NOISEKWS_DSP_FRONTEND_HPP_
