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

#ifndef NOISEKWS_NN_WEIGHTS_IO_HPP_
#define NOISEKWS_NN_WEIGHTS_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "nn/model.hpp"

namespace nkws::nn {

inline constexpr std::uint32_t kWeightFormatVersion = 1;

using Provenance = std::map<std::string, std::string>;

struct WeightFile {
  ArchSpec arch;
  ModelParams<float> params;
  Provenance provenance;
};

// Layout: "NKWS" | u32 version | u32 header length | JSON header |
// f32 LE tensor data | u32 CRC32 of all preceding bytes.
std::vector<std::uint8_t> encode_weights(const ModelParams<float>& params,
                                         const ArchSpec& arch,
                                         const Provenance& provenance = {});

// Throws ChecksumMismatch on truncation or a bad trailer, and
// FormatVersionMismatch on a bad magic, version, header, or a tensor manifest
// that disagrees with the architecture.
WeightFile decode_weights(std::span<const std::uint8_t> bytes);

void save_weights(const ModelParams<float>& params, const ArchSpec& arch,
                  const std::filesystem::path& path, const Provenance& provenance = {});
WeightFile load_weights(const std::filesystem::path& path);

// The CRC32 trailer of an encoded file.
std::uint32_t stored_checksum(std::span<const std::uint8_t> bytes);

std::string arch_to_json(const ArchSpec& arch);
ArchSpec arch_from_json(const std::string& text);

}  // namespace nkws::nn

#endif  // NOISEKWS_NN_WEIGHTS_IO_HPP_
