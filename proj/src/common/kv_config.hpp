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

#ifndef NOISEKWS_COMMON_KV_CONFIG_HPP_
#define NOISEKWS_COMMON_KV_CONFIG_HPP_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace nkws {

// Human-readable "key = value" settings. Lines starting with '#' are
// comments; keys are dotted ("train.lr0"). Lists are comma separated.
class KvConfig {
 public:
  static KvConfig parse(const std::string& text);
  static KvConfig load(const std::filesystem::path& path);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  // Entries in other override entries here.
  void merge(const KvConfig& other);

  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<std::string> get_list(
      const std::string& key, const std::vector<std::string>& fallback) const;
  std::vector<int> get_int_list(const std::string& key,
                                const std::vector<int>& fallback) const;

  // Sorted "key = value" lines; parse(to_text()) reproduces the config.
  std::string to_text() const;

  const std::map<std::string, std::string>& entries() const {
    return entries_;
  }

 private:
  std::map<std::string, std::string> entries_;
};

double parse_double(const std::string& text, const std::string& what);
long long parse_int(const std::string& text, const std::string& what);
std::vector<std::string> split_list(const std::string& text);
std::string trim(const std::string& text);

}  // namespace nkws

#endif  // NOISEKWS_COMMON_KV_CONFIG_HPP_
