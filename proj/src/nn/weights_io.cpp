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

#include "nn/weights_io.hpp"

#include <bit>
#include <cstring>

#include "common/checksum.hpp"
#include "common/error.hpp"
#include "json.hpp"

namespace nkws::nn {
namespace {

using nlohmann::json;

constexpr char kMagic[4] = {'N', 'K', 'W', 'S'};
constexpr std::size_t kPreamble = 12;

static_assert(std::endian::native == std::endian::little,
              "weight files are written with the host's little-endian layout");

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) | static_cast<std::uint32_t>(b[at + 1]) << 8 |
         static_cast<std::uint32_t>(b[at + 2]) << 16 |
         static_cast<std::uint32_t>(b[at + 3]) << 24;
}

json arch_json(const ArchSpec& arch) {
  json blocks = json::array();
  for (const auto& b : arch.blocks) {
    blocks.push_back({{"out_channels", b.out_channels},
                      {"kernel_h", b.kernel_h},
                      {"kernel_w", b.kernel_w},
                      {"stride", b.stride},
                      {"activation", activation_name(b.activation)}});
  }
  return {{"in_channels", arch.in_channels},   {"input_height", arch.input_height},
          {"input_width", arch.input_width},   {"conv_blocks", blocks},
          {"n_classes", arch.n_classes},       {"bn_eps", arch.bn_eps},
          {"bn_momentum", arch.bn_momentum}};
}

ArchSpec arch_of(const json& j) {
  ArchSpec arch;
  arch.in_channels = j.at("in_channels").get<int>();
  arch.input_height = j.at("input_height").get<int>();
  arch.input_width = j.at("input_width").get<int>();
  arch.n_classes = j.at("n_classes").get<int>();
  arch.bn_eps = j.at("bn_eps").get<double>();
  arch.bn_momentum = j.at("bn_momentum").get<double>();
  for (const auto& b : j.at("conv_blocks")) {
    ConvBlockSpec s;
    s.out_channels = b.at("out_channels").get<int>();
    s.kernel_h = b.at("kernel_h").get<int>();
    s.kernel_w = b.at("kernel_w").get<int>();
    s.stride = b.at("stride").get<int>();
    s.activation = parse_activation(b.at("activation").get<std::string>());
    arch.blocks.push_back(s);
  }
  return arch;
}

}  // namespace

std::string arch_to_json(const ArchSpec& arch) { return arch_json(arch).dump(); }

ArchSpec arch_from_json(const std::string& text) {
  try {
    return arch_of(json::parse(text));
  } catch (const json::exception& e) {
    fail(ErrorCode::kConfigInvalid, std::string("bad architecture JSON: ") + e.what());
  }
}

std::vector<std::uint8_t> encode_weights(const ModelParams<float>& params,
                                         const ArchSpec& arch,
                                         const Provenance& provenance) {
  check_params(params, arch);
  json tensors = json::array();
  std::size_t offset = 0;
  for (std::size_t i = 0; i < params.tensors.size(); ++i) {
    const auto& t = params.tensors[i];
    if (!t.all_finite()) {
      fail(ErrorCode::kInvalidArgument, "refusing to save non-finite tensor " + params.names[i]);
    }
    tensors.push_back({{"name", params.names[i]}, {"dims", t.dims()}, {"offset", offset}});
    offset += t.size() * sizeof(float);
  }
  const json header = {{"arch", arch_json(arch)},
                       {"tensors", tensors},
                       {"provenance", json(provenance)}};
  const std::string text = header.dump();

  std::vector<std::uint8_t> out;
  out.reserve(kPreamble + text.size() + offset + 4);
  out.insert(out.end(), kMagic, kMagic + 4);
  put_u32(out, kWeightFormatVersion);
  put_u32(out, static_cast<std::uint32_t>(text.size()));
  out.insert(out.end(), text.begin(), text.end());
  const std::size_t data_at = out.size();
  out.resize(data_at + offset);
  std::uint8_t* dst = out.data() + data_at;
  for (const auto& t : params.tensors) {
    std::memcpy(dst, t.data(), t.size() * sizeof(float));
    dst += t.size() * sizeof(float);
  }
  put_u32(out, crc32(out));
  return out;
}

std::uint32_t stored_checksum(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) fail(ErrorCode::kChecksumMismatch, "weight file too short");
  return get_u32(bytes, bytes.size() - 4);
}

WeightFile decode_weights(std::span<const std::uint8_t> bytes) {
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), kMagic, 4) != 0) {
    fail(ErrorCode::kFormatVersionMismatch, "not a weight file (bad magic)");
  }
  if (bytes.size() < kPreamble + 4) {
    fail(ErrorCode::kChecksumMismatch, "weight file truncated");
  }
  const auto body = bytes.first(bytes.size() - 4);
  if (crc32(body) != stored_checksum(bytes)) {
    fail(ErrorCode::kChecksumMismatch, "weight file CRC32 mismatch (corrupt or truncated)");
  }
  const std::uint32_t version = get_u32(bytes, 4);
  if (version != kWeightFormatVersion) {
    fail(ErrorCode::kFormatVersionMismatch,
         "unsupported weight format version " + std::to_string(version));
  }
  const std::size_t header_len = get_u32(bytes, 8);
  if (header_len > body.size() - kPreamble) {
    fail(ErrorCode::kFormatVersionMismatch, "weight header length out of range");
  }

  WeightFile file;
  json header;
  try {
    header = json::parse(body.begin() + kPreamble, body.begin() + kPreamble + header_len);
    file.arch = arch_of(header.at("arch"));
    file.provenance = header.at("provenance").get<Provenance>();
    file.arch.validate();
  } catch (const json::exception& e) {
    fail(ErrorCode::kFormatVersionMismatch, std::string("bad weight header: ") + e.what());
  } catch (const Error& e) {
    fail(ErrorCode::kFormatVersionMismatch, std::string("bad architecture: ") + e.what());
  }

  const auto expected = zero_params<float>(file.arch);
  const auto data = body.subspan(kPreamble + header_len);
  try {
    const auto& entries = header.at("tensors");
    if (entries.size() != expected.tensors.size()) {
      fail(ErrorCode::kFormatVersionMismatch, "tensor count disagrees with architecture");
    }
    std::size_t cursor = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const auto& e = entries[i];
      const auto name = e.at("name").get<std::string>();
      const auto dims = e.at("dims").get<Dims>();
      const auto offset = e.at("offset").get<std::size_t>();
      if (name != expected.names[i] || dims != expected.tensors[i].dims() || offset != cursor) {
        fail(ErrorCode::kFormatVersionMismatch,
             "tensor " + name + " " + dims_string(dims) + " disagrees with architecture (want " +
                 expected.names[i] + " " + dims_string(expected.tensors[i].dims()) + ")");
      }
      const std::size_t n = dims_product(dims);
      if (cursor + n * sizeof(float) > data.size()) {
        fail(ErrorCode::kFormatVersionMismatch, "tensor data overruns the file");
      }
      std::vector<float> values(n);
      std::memcpy(values.data(), data.data() + cursor, n * sizeof(float));
      file.params.names.push_back(name);
      file.params.tensors.emplace_back(dims, std::move(values));
      cursor += n * sizeof(float);
    }
    if (cursor != data.size()) {
      fail(ErrorCode::kFormatVersionMismatch, "trailing bytes after tensor data");
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::kFormatVersionMismatch, std::string("bad tensor manifest: ") + e.what());
  }
  return file;
}

void save_weights(const ModelParams<float>& params, const ArchSpec& arch,
                  const std::filesystem::path& path, const Provenance& provenance) {
  write_file_bytes(path, encode_weights(params, arch, provenance));
}

WeightFile load_weights(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  try {
    return decode_weights(bytes);
  } catch (const Error& e) {
    fail(e.code(), path.string() + ": " + e.what());
  }
}

}  // namespace nkws::nn
