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

#include "dataset/labels.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "common/error.hpp"

namespace nkws::data {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

bool in_vocabulary(std::string_view word) {
  return std::find(kVocabulary.begin(), kVocabulary.end(), word) !=
         kVocabulary.end();
}

ClassLabel assign_class(std::string_view raw_word) {
  if (raw_word == kSilenceToken) return ClassLabel{kSilenceIndex};
  if (!in_vocabulary(raw_word)) {
    fail(ErrorCode::kUnknownWord,
         "'" + std::string(raw_word) + "' is not a Speech Commands word");
  }
  for (int i = 0; i < kUnknownIndex; ++i) {
    if (lower(kClassNames[static_cast<std::size_t>(i)]) == raw_word) {
      return ClassLabel{i};
    }
  }
  return ClassLabel{kUnknownIndex};
}

ClassLabel class_from_name(std::string_view name) {
  const std::string key = lower(name);
  for (int i = 0; i < kNumClasses; ++i) {
    if (lower(kClassNames[static_cast<std::size_t>(i)]) == key) {
      return ClassLabel{i};
    }
  }
  fail(ErrorCode::kConfigInvalid, "unknown class name '" + std::string(name) + "'");
}

ClassLabel class_from_index(int index) {
  if (index < 0 || index >= kNumClasses) {
    fail(ErrorCode::kConfigInvalid,
         "class index " + std::to_string(index) + " out of range");
  }
  return ClassLabel{index};
}

}  // namespace nkws::data
