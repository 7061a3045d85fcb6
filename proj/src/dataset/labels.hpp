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

#ifndef NOISEKWS_DATASET_LABELS_HPP_
#define NOISEKWS_DATASET_LABELS_HPP_

#include <array>
#include <compare>
#include <string_view>

namespace nkws::data {

inline constexpr int kNumClasses = 12;
inline constexpr int kUnknownIndex = 10;
inline constexpr int kSilenceIndex = 11;
inline constexpr std::string_view kSilenceToken = "_silence_";

inline constexpr std::array<std::string_view, kNumClasses> kClassNames = {
    "Yes", "No",   "Up", "Down", "Left",    "Right",
    "On",  "Off", "Stop", "Go",  "Unknown", "Silence"};

// Folder names of the 35-word Speech Commands v2 vocabulary.
inline constexpr std::array<std::string_view, 35> kVocabulary = {
    "backward", "bed",   "bird",   "cat",   "dog",   "down",  "eight",
    "five",     "follow", "forward", "four", "go",    "happy", "house",
    "learn",    "left",  "marvin", "nine",  "no",    "off",   "on",
    "one",      "right", "seven",  "sheila", "six",  "stop",  "three",
    "tree",     "two",   "up",     "visual", "wow",  "yes",   "zero"};

struct ClassLabel {
  int index = 0;

  std::string_view name() const { return kClassNames.at(index); }
  auto operator<=>(const ClassLabel&) const = default;
};

// Keyword folders map to their class, the other 25 words to Unknown and the
// silence token to Silence. Throws UnknownWord otherwise.
ClassLabel assign_class(std::string_view raw_word);

// Accepts a class name ("Yes", "unknown", ...) case-insensitively.
ClassLabel class_from_name(std::string_view name);
ClassLabel class_from_index(int index);

bool in_vocabulary(std::string_view word);

}  // namespace nkws::data

#endif  // NOISEKWS_DATASET_LABELS_HPP_
