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

#include "dsp/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "common/checksum.hpp"
#include "common/error.hpp"

namespace nkws::dsp {

namespace {

std::uint16_t le16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t le32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
  }
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

}  // namespace

AudioClip decode_wav(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    fail(ErrorCode::kCorruptHeader, "not a RIFF/WAVE stream");
  }
  bool have_fmt = false;
  std::span<const std::uint8_t> payload;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::uint32_t size = le32(chunk + 4);
    const std::size_t body = pos + 8;
    if (size > bytes.size() - body) {
      fail(ErrorCode::kCorruptHeader, "chunk overruns the stream");
    }
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16) fail(ErrorCode::kCorruptHeader, "fmt chunk too short");
      const std::uint8_t* f = bytes.data() + body;
      std::uint16_t format = le16(f);
      const std::uint16_t channels = le16(f + 2);
      const std::uint32_t rate = le32(f + 4);
      const std::uint16_t bits = le16(f + 14);
      if (format == kFormatExtensible) {
        if (size < 40) fail(ErrorCode::kCorruptHeader, "short extensible fmt");
        format = le16(f + 24);
      }
      if (format != kFormatPcm) {
        fail(ErrorCode::kUnsupportedFormat,
             "only PCM is supported (format tag " + std::to_string(format) +
                 ")");
      }
      if (channels != 1) {
        fail(ErrorCode::kUnsupportedFormat,
             "expected mono, got " + std::to_string(channels) + " channels");
      }
      if (rate != static_cast<std::uint32_t>(kSampleRateHz)) {
        fail(ErrorCode::kUnsupportedFormat,
             "expected 16000 Hz, got " + std::to_string(rate));
      }
      if (bits != 16) {
        fail(ErrorCode::kUnsupportedFormat,
             "expected 16-bit samples, got " + std::to_string(bits));
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      payload = bytes.subspan(body, size);
      have_data = true;
    }
    pos = body + size + (size & 1u);
  }
  if (!have_fmt) fail(ErrorCode::kCorruptHeader, "missing fmt chunk");
  if (!have_data) fail(ErrorCode::kCorruptHeader, "missing data chunk");
  if (payload.size() % 2 != 0) {
    fail(ErrorCode::kCorruptHeader, "data chunk has an odd byte count");
  }

  AudioClip clip;
  clip.sample_rate_hz = kSampleRateHz;
  clip.samples.resize(payload.size() / 2);
  for (std::size_t i = 0; i < clip.samples.size(); ++i) {
    const auto raw = static_cast<std::int16_t>(le16(payload.data() + 2 * i));
    clip.samples[i] = static_cast<float>(raw) / 32768.0f;
  }
  return clip;
}

AudioClip read_wav(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  try {
    return decode_wav(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::vector<std::uint8_t> encode_wav(const AudioClip& clip) {
  const auto n = static_cast<std::uint32_t>(clip.samples.size());
  std::vector<std::uint8_t> out;
  out.reserve(44 + 2 * static_cast<std::size_t>(n));
  put_tag(out, "RIFF");
  put32(out, 36 + 2 * n);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put32(out, 16);
  put16(out, kFormatPcm);
  put16(out, 1);
  put32(out, static_cast<std::uint32_t>(clip.sample_rate_hz));
  put32(out, static_cast<std::uint32_t>(clip.sample_rate_hz) * 2);
  put16(out, 2);
  put16(out, 16);
  put_tag(out, "data");
  put32(out, 2 * n);
  for (float s : clip.samples) {
    const float scaled = std::nearbyint(s * 32768.0f);
    const auto v = static_cast<std::int16_t>(std::clamp(scaled, -32768.0f, 32767.0f));
    put16(out, static_cast<std::uint16_t>(v));
  }
  return out;
}

void write_wav(const std::filesystem::path& path, const AudioClip& clip) {
  write_file_bytes(path, encode_wav(clip));
}

}  // namespace nkws::dsp
