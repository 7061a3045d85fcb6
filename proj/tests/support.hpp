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

#ifndef NOISEKWS_TESTS_SUPPORT_HPP_
#define NOISEKWS_TESTS_SUPPORT_HPP_

#include <atomic>
#include <cmath>
#include <filesystem>
#include <string>
#include <unistd.h>

#include "common/error.hpp"
#include "dataset/synth.hpp"

namespace nkws::testing {

// Unique scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("nkws_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Small synthetic corpus shared by every test in the process. Noise sources
// live in <root>/_noise_sources_.
inline const std::filesystem::path& tiny_corpus() {
  static TempDir dir;
  static const bool built = [] {
    data::SynthCorpusConfig cfg;
    cfg.keyword_clips = 40;
    cfg.other_clips = 6;
    cfg.speakers = 30;
    cfg.background_seconds = 4.0;
    cfg.seed = 7;
    data::synthesize_corpus(dir.path(), cfg);
    data::synthesize_noise_dir(dir.path() / "_noise_sources_", 11, 4.0);
    return true;
  }();
  (void)built;
  return dir.path();
}

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-8});
}

}  // namespace nkws::testing

// Expects expr to throw nkws::Error with the given code.
#define NKWS_CHECK_ERROR(expr, error_code)                        \
  do {                                                            \
    bool nkws_thrown_ = false;                                    \
    try {                                                         \
      (void)(expr);                                               \
    } catch (const ::nkws::Error& nkws_e_) {                      \
      nkws_thrown_ = true;                                        \
      CHECK_MESSAGE(nkws_e_.code() == (error_code), nkws_e_.what()); \
    }                                                             \
    CHECK_MESSAGE(nkws_thrown_, "expected an nkws::Error");        \
  } while (false)

#endif  // NOISEKWS_TESTS_SUPPORT_HPP_
