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

#include "bench/run_manifest.hpp"

#include <chrono>
#include <ctime>

#include "common/checksum.hpp"
#include "common/error.hpp"
#include "json.hpp"

namespace nkws::bench {

using nlohmann::json;

std::string content_id(const std::filesystem::path& path) {
  return hex32(crc32(read_file_bytes(path)));
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::filesystem::path manifest_path_for(const std::filesystem::path& artifact) {
  auto p = artifact;
  p += ".manifest.json";
  return p;
}

void RunManifest::add_input(const std::filesystem::path& path) {
  inputs[path.string()] = content_id(path);
}

void RunManifest::add_artifact(const std::filesystem::path& path) {
  artifacts[path.string()] = content_id(path);
}

std::string RunManifest::to_json() const {
  const json j = {{"command", command},     {"args", args},
                  {"config", config.entries()}, {"seeds", seeds},
                  {"inputs", inputs},       {"artifacts", artifacts},
                  {"started_at", started_at}, {"finished_at", finished_at}};
  return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.args = j.at("args").get<std::vector<std::string>>();
    for (const auto& [k, v] : j.at("config").get<std::map<std::string, std::string>>()) {
      m.config.set(k, v);
    }
    m.seeds = j.at("seeds").get<std::map<std::string, std::uint64_t>>();
    m.inputs = j.at("inputs").get<std::map<std::string, std::string>>();
    m.artifacts = j.at("artifacts").get<std::map<std::string, std::string>>();
    m.started_at = j.at("started_at").get<std::string>();
    m.finished_at = j.at("finished_at").get<std::string>();
    return m;
  } catch (const json::exception& e) {
    fail(ErrorCode::kCorruptHeader, std::string("bad run manifest: ") + e.what());
  }
}

void RunManifest::write(const std::filesystem::path& path) const {
  const std::string text = to_json();
  write_file_bytes(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

RunManifest RunManifest::read(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return from_json(std::string(bytes.begin(), bytes.end()));
}

}  // namespace nkws::bench
