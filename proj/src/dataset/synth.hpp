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

#ifndef NOISEKWS_DATASET_SYNTH_HPP_
#define NOISEKWS_DATASET_SYNTH_HPP_

#include <cstdint>
#include <filesystem>
#include <string_view>

#include "dsp/wav.hpp"

namespace nkws::data {

// Synthetic stand-in for the Speech Commands v2 tree: one folder per word of
// formant-synthesized utterances, speaker-disjoint validation/testing lists
// (about 10 % each) and a _background_noise_ folder.
struct SynthCorpusConfig {
  std::size_t keyword_clips = 250;  // per keyword folder
  std::size_t other_clips = 30;     // per non-keyword folder
  std::size_t speakers = 120;
  double background_seconds = 20.0;
  std::uint64_t seed = 1;
};

void synthesize_corpus(const std::filesystem::path& root,
                       const SynthCorpusConfig& cfg);

// Writes <dir>/<source>.wav for the indoor and on-site sources (everything
// except the generated white/pink noise).
void synthesize_noise_dir(const std::filesystem::path& dir, std::uint64_t seed,
                          double seconds = 30.0);

// One utterance of word by a speaker. Deterministic in (word, speaker, take).
dsp::AudioClip synthesize_word(std::string_view word,
                               std::uint64_t speaker_seed,
                               std::uint64_t take_seed);

}  // namespace nkws::data

#endif  // NOISEKWS_DATASET_SYNTH_HPP_
