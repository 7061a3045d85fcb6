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

#include "dsp/frontend.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <mutex>
#include <numbers>
#include <string>

#include "common/checksum.hpp"
#include "common/error.hpp"

namespace nkws::dsp {

namespace {

// The FFTW planner is not reentrant; execution with fresh arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n_real, std::size_t n_complex)
      : in(fftw_alloc_real(n_real)), out(fftw_alloc_complex(n_complex)) {}
  ~FftwBuffer() {
    fftw_free(in);
    fftw_free(out);
  }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;

  double* in;
  fftw_complex* out;
};

}  // namespace

struct LogMelFrontend::Plan {
  explicit Plan(int n) : size(n) {
    FftwBuffer scratch(static_cast<std::size_t>(n),
                       static_cast<std::size_t>(n / 2 + 1));
    std::lock_guard<std::mutex> lock(planner_mutex());
    handle = fftw_plan_dft_r2c_1d(n, scratch.in, scratch.out, FFTW_ESTIMATE);
  }
  ~Plan() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(handle);
  }
  int size;
  fftw_plan handle;
};

int FrontendConfig::win_length() const {
  return static_cast<int>(std::lround(sample_rate_hz * win_ms / 1000.0));
}

int FrontendConfig::hop_length() const {
  return static_cast<int>(std::lround(sample_rate_hz * hop_ms / 1000.0));
}

void FrontendConfig::validate() const {
  if (sample_rate_hz <= 0) fail(ErrorCode::kConfigInvalid, "sample rate <= 0");
  if (win_length() <= 0 || hop_length() <= 0) {
    fail(ErrorCode::kConfigInvalid, "window and hop must be positive");
  }
  if (fft_size < 2 || fft_size % 2 != 0) {
    fail(ErrorCode::kConfigInvalid, "fft_size must be even and >= 2");
  }
  if (win_length() > fft_size) {
    fail(ErrorCode::kConfigInvalid,
         "window length " + std::to_string(win_length()) +
             " exceeds fft_size " + std::to_string(fft_size));
  }
  if (n_mels <= 0) fail(ErrorCode::kConfigInvalid, "n_mels must be positive");
  if (!(f_min_hz >= 0.0 && f_min_hz < f_max_hz &&
        f_max_hz <= sample_rate_hz / 2.0)) {
    fail(ErrorCode::kConfigInvalid,
         "need 0 <= f_min < f_max <= sample_rate / 2");
  }
  if (!(log_floor > 0.0)) {
    fail(ErrorCode::kConfigInvalid, "log_floor must be positive");
  }
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

AudioClip pad_or_trim(const AudioClip& clip, std::size_t target_len) {
  AudioClip out;
  out.sample_rate_hz = clip.sample_rate_hz;
  out.samples.assign(target_len, 0.0f);
  const std::size_t n = std::min(target_len, clip.samples.size());
  std::copy_n(clip.samples.begin(), n, out.samples.begin());
  return out;
}

Matrix mel_filterbank(const FrontendConfig& cfg) {
  cfg.validate();
  const auto n_bins = static_cast<std::size_t>(cfg.n_bins());
  const auto n_mels = static_cast<std::size_t>(cfg.n_mels);

  const double mel_lo = hz_to_mel(cfg.f_min_hz);
  const double mel_hi = hz_to_mel(cfg.f_max_hz);
  std::vector<double> edges(n_mels + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const double mel =
        mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) /
                     static_cast<double>(n_mels + 1);
    edges[i] = mel_to_hz(mel);
  }

  Matrix fb{n_mels, n_bins, std::vector<float>(n_mels * n_bins, 0.0f)};
  for (std::size_t m = 0; m < n_mels; ++m) {
    const double left = edges[m];
    const double center = edges[m + 1];
    const double right = edges[m + 2];
    float peak = 0.0f;
    for (std::size_t k = 0; k < n_bins; ++k) {
      const double f = static_cast<double>(k) * cfg.sample_rate_hz /
                       static_cast<double>(cfg.fft_size);
      const double rise = (f - left) / (center - left);
      const double fall = (right - f) / (right - center);
      const double w = std::max(0.0, std::min(rise, fall));
      fb.values[m * n_bins + k] = static_cast<float>(w);
      peak = std::max(peak, static_cast<float>(w));
    }
    if (!(peak > 0.0f)) {
      fail(ErrorCode::kConfigInvalid,
           "mel filter " + std::to_string(m) +
               " covers no FFT bin; lower n_mels or raise fft_size");
    }
  }
  return fb;
}

LogMelFrontend::LogMelFrontend(FrontendConfig cfg)
    : cfg_(cfg), filterbank_(mel_filterbank(cfg)) {
  const int win = cfg_.win_length();
  const int offset = (cfg_.fft_size - win) / 2;
  window_.assign(static_cast<std::size_t>(cfg_.fft_size), 0.0);
  for (int n = 0; n < win; ++n) {
    window_[static_cast<std::size_t>(offset + n)] =
        0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / win);
  }
  plan_ = std::make_unique<Plan>(cfg_.fft_size);
}

LogMelFrontend::~LogMelFrontend() = default;

Matrix LogMelFrontend::power(const AudioClip& clip) const {
  const auto n = clip.samples.size();
  const auto fft = static_cast<std::size_t>(cfg_.fft_size);
  const auto hop = static_cast<std::size_t>(cfg_.hop_length());
  const std::size_t pad = fft / 2;
  if (clip.sample_rate_hz != cfg_.sample_rate_hz) {
    fail(ErrorCode::kConfigInvalid, "clip sample rate differs from frontend");
  }
  if (n <= pad) {
    fail(ErrorCode::kConfigInvalid,
         "clip shorter than half the FFT size cannot be reflect padded");
  }

  // Reflect padding without repeating the edge sample.
  std::vector<double> padded(n + 2 * pad);
  for (std::size_t p = 0; p < padded.size(); ++p) {
    const auto j = static_cast<long long>(p) - static_cast<long long>(pad);
    long long src = j;
    if (j < 0) src = -j;
    if (j >= static_cast<long long>(n)) src = 2 * (static_cast<long long>(n) - 1) - j;
    padded[p] = clip.samples[static_cast<std::size_t>(src)];
  }

  const std::size_t frames = 1 + (padded.size() - fft) / hop;
  const std::size_t bins = fft / 2 + 1;
  Matrix out{frames, bins, std::vector<float>(frames * bins)};
  FftwBuffer buf(fft, bins);
  for (std::size_t t = 0; t < frames; ++t) {
    const double* frame = padded.data() + t * hop;
    for (std::size_t i = 0; i < fft; ++i) buf.in[i] = frame[i] * window_[i];
    fftw_execute_dft_r2c(plan_->handle, buf.in, buf.out);
    float* row = out.values.data() + t * bins;
    for (std::size_t k = 0; k < bins; ++k) {
      const double re = buf.out[k][0];
      const double im = buf.out[k][1];
      row[k] = static_cast<float>(re * re + im * im);
    }
  }
  return out;
}

Spectrogram LogMelFrontend::compute(const AudioClip& clip) const {
  const Matrix pow = power(clip);
  const std::size_t mels = filterbank_.rows;
  const std::size_t bins = filterbank_.cols;
  Spectrogram out{pow.rows, mels, std::vector<float>(pow.rows * mels)};
  for (std::size_t t = 0; t < pow.rows; ++t) {
    const float* p = pow.values.data() + t * bins;
    for (std::size_t m = 0; m < mels; ++m) {
      const float* w = filterbank_.values.data() + m * bins;
      double acc = 0.0;
      for (std::size_t k = 0; k < bins; ++k) {
        acc += static_cast<double>(w[k]) * static_cast<double>(p[k]);
      }
      out.values[t * mels + m] =
          static_cast<float>(std::log(acc + cfg_.log_floor));
    }
  }
  return out;
}

Matrix stft_power(const AudioClip& clip, const FrontendConfig& cfg) {
  return LogMelFrontend(cfg).power(clip);
}

Spectrogram log_mel(const AudioClip& clip, const FrontendConfig& cfg) {
  return LogMelFrontend(cfg).compute(clip);
}

std::vector<std::uint8_t> encode_spectrogram(const Spectrogram& spec) {
  static_assert(std::endian::native == std::endian::little,
                "spectrogram dump assumes a little-endian host");
  std::vector<std::uint8_t> out(8 + spec.values.size() * 4);
  const auto rows = static_cast<std::uint32_t>(spec.rows);
  const auto cols = static_cast<std::uint32_t>(spec.cols);
  std::memcpy(out.data(), &rows, 4);
  std::memcpy(out.data() + 4, &cols, 4);
  std::memcpy(out.data() + 8, spec.values.data(), spec.values.size() * 4);
  return out;
}

Spectrogram decode_spectrogram(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8) fail(ErrorCode::kCorruptHeader, "spectrogram too short");
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::memcpy(&rows, bytes.data(), 4);
  std::memcpy(&cols, bytes.data() + 4, 4);
  const std::size_t count = static_cast<std::size_t>(rows) * cols;
  if (bytes.size() != 8 + count * 4) {
    fail(ErrorCode::kCorruptHeader, "spectrogram size disagrees with dims");
  }
  Spectrogram spec{rows, cols, std::vector<float>(count)};
  std::memcpy(spec.values.data(), bytes.data() + 8, count * 4);
  return spec;
}

void write_spectrogram(const std::filesystem::path& path,
                       const Spectrogram& spec) {
  write_file_bytes(path, encode_spectrogram(spec));
}

Spectrogram read_spectrogram(const std::filesystem::path& path) {
  return decode_spectrogram(read_file_bytes(path));
}

}  // namespace nkws::dsp
