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

#include "common/kv_config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "common/error.hpp"

namespace nkws {

std::string trim(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return text.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

double parse_double(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    fail(ErrorCode::kConfigInvalid,
         "expected a number for " + what + ", got '" + text + "'");
  }
  return value;
}

long long parse_int(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  long long value = 0;
  const char* begin = t.data();
  if (!t.empty() && t[0] == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    fail(ErrorCode::kConfigInvalid,
         "expected an integer for " + what + ", got '" + text + "'");
  }
  return value;
}

KvConfig KvConfig::parse(const std::string& text) {
  KvConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      fail(ErrorCode::kConfigInvalid,
           "config line " + std::to_string(line_no) + " has no '='");
    }
    const std::string key = trim(t.substr(0, eq));
    if (key.empty()) {
      fail(ErrorCode::kConfigInvalid,
           "config line " + std::to_string(line_no) + " has an empty key");
    }
    cfg.entries_[key] = trim(t.substr(eq + 1));
  }
  return cfg;
}

KvConfig KvConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIoError, "cannot read config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void KvConfig::set(const std::string& key, const std::string& value) {
  entries_[key] = value;
}

bool KvConfig::has(const std::string& key) const {
  return entries_.count(key) != 0;
}

void KvConfig::merge(const KvConfig& other) {
  for (const auto& [k, v] : other.entries_) entries_[k] = v;
}

std::string KvConfig::get_string(const std::string& key,
                                 const std::string& fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

double KvConfig::get_double(const std::string& key, double fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : parse_double(it->second, key);
}

long long KvConfig::get_int(const std::string& key, long long fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : parse_int(it->second, key);
}

bool KvConfig::get_bool(const std::string& key, bool fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  const std::string& v = it->second;
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  fail(ErrorCode::kConfigInvalid, "expected a boolean for " + key);
}

std::vector<std::string> KvConfig::get_list(
    const std::string& key, const std::vector<std::string>& fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : split_list(it->second);
}

std::vector<int> KvConfig::get_int_list(const std::string& key,
                                        const std::vector<int>& fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  std::vector<int> values;
  for (const auto& item : split_list(it->second)) {
    values.push_back(static_cast<int>(parse_int(item, key)));
  }
  return values;
}

std::string KvConfig::to_text() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
  return out;
}

}  // namespace nkws
