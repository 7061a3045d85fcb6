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

#ifndef NOISEKWS_BENCH_RUN_MANIFEST_HPP_
#define NOISEKWS_BENCH_RUN_MANIFEST_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "common/kv_config.hpp"

namespace nkws::bench {

// JSON sidecar that ties an artifact to the command, configuration, seeds and
// inputs that produced it.
struct RunManifest {
  std::string command;
  std::vector<std::string> args;
  KvConfig config;
  std::map<std::string, std::uint64_t> seeds;
  std::map<std::string, std::string> inputs;     // path -> content id
  std::map<std::string, std::string> artifacts;  // path -> content id
  std::string started_at;
  std::string finished_at;

  void add_input(const std::filesystem::path& path);
  void add_artifact(const std::filesystem::path& path);

  std::string to_json() const;
  static RunManifest from_json(const std::string& text);
  void write(const std::filesystem::path& path) const;
  static RunManifest read(const std::filesystem::path& path);
};

// CRC32 of the file's bytes as 8 hex digits.
std::string content_id(const std::filesystem::path& path);

// "2026-01-31T12:00:00Z"
std::string utc_timestamp();

std::filesystem::path manifest_path_for(const std::filesystem::path& artifact);

}  // namespace nkws::bench

#endif  // NOISEKWS_BENCH_RUN_MANIFEST_HPP_
