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

#include "dataset/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "common/checksum.hpp"
#include "common/error.hpp"
#include "common/rng.hpp"
#include "dataset/corpus.hpp"
#include "dataset/labels.hpp"
#include "dataset/noise.hpp"

namespace nkws::data {

namespace fs = std::filesystem;

namespace {

constexpr double kRate = dsp::kSampleRateHz;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t word_hash(std::string_view word) {
  return derive_seed(0x5EEDULL, word);
}

struct Segment {
  enum Kind { kVowel, kFricative, kBurst } kind = kVowel;
  double duration = 0.1;  // seconds at tempo 1
  double f1 = 500, f2 = 1500, f3 = 2700;
  double pitch_slope = 0.0;  // relative change over the segment
  double fric_center = 4000, fric_q = 3;
};

std::vector<Segment> word_plan(std::string_view word) {
  Rng rng(word_hash(word));
  const std::size_t n = 2 + rng.uniform_index(2);
  std::vector<Segment> plan(n);
  for (std::size_t i = 0; i < n; ++i) {
    Segment& s = plan[i];
    const double u = rng.uniform01();
    s.kind = u < 0.68 ? Segment::kVowel : (u < 0.9 ? Segment::kFricative : Segment::kBurst);
    if (i == 1 && s.kind != Segment::kVowel) s.kind = Segment::kVowel;
    s.duration = s.kind == Segment::kBurst ? rng.uniform(0.03, 0.06)
                 : s.kind == Segment::kFricative ? rng.uniform(0.07, 0.16)
                                                : rng.uniform(0.10, 0.24);
    s.f1 = rng.uniform(280, 880);
    s.f2 = rng.uniform(850, 2500);
    s.f3 = rng.uniform(2400, 3300);
    s.pitch_slope = rng.uniform(-0.35, 0.35);
    s.fric_center = rng.uniform(2200, 6800);
    s.fric_q = rng.uniform(1.5, 5.0);
  }
  return plan;
}

// Direct-form biquad band-pass (constant peak gain).
struct BandPass {
  BandPass(double center, double q) {
    const double w = kTwoPi * center / kRate;
    const double alpha = std::sin(w) / (2.0 * q);
    const double a0 = 1.0 + alpha;
    b0 = alpha / a0;
    b2 = -alpha / a0;
    a1 = -2.0 * std::cos(w) / a0;
    a2 = (1.0 - alpha) / a0;
  }
  double step(double x) {
    const double y = b0 * x + b2 * x2 - a1 * y1 - a2 * y2;
    x2 = x1;
    x1 = x;
    y2 = y1;
    y1 = y;
    return y;
  }
  double b0, b2, a1, a2;
  double x1 = 0, x2 = 0, y1 = 0, y2 = 0;
};

struct OnePoleLowPass {
  explicit OnePoleLowPass(double cutoff) : a(std::exp(-kTwoPi * cutoff / kRate)) {}
  double step(double x) { return y = (1.0 - a) * x + a * y; }
  double a;
  double y = 0.0;
};

double formant_gain(double f, double formant) {
  const double bw = 70.0 + 0.08 * formant;
  const double d = (f - formant) / bw;
  return 1.0 / (1.0 + d * d);
}

// Renders a word plan into out starting at sample start.
void render_word(std::vector<float>& out, std::size_t start,
                 const std::vector<Segment>& plan, double f0, double formant_scale,
                 double tempo, double gain, Rng& rng) {
  std::size_t pos = start;
  std::vector<double> phase(64, 0.0);
  for (std::size_t si = 0; si < plan.size(); ++si) {
    const Segment& s = plan[si];
    const auto len = static_cast<std::size_t>(s.duration / tempo * kRate);
    const double jitter = rng.uniform(0.95, 1.05);
    BandPass fric(std::min(s.fric_center * formant_scale, 7400.0), s.fric_q);
    const Segment* next = si + 1 < plan.size() ? &plan[si + 1] : nullptr;
    for (std::size_t i = 0; i < len && pos < out.size(); ++i, ++pos) {
      const double t = static_cast<double>(i) / static_cast<double>(len);
      // Raised-cosine edges of 12 ms.
      const double edge = 0.012 * kRate;
      double env = 1.0;
      if (i < edge) env = 0.5 - 0.5 * std::cos(std::numbers::pi * i / edge);
      if (len - i < edge) env = std::min(env, 0.5 - 0.5 * std::cos(std::numbers::pi * (len - i) / edge));
      double v = 0.0;
      if (s.kind == Segment::kVowel) {
        // Glide formants toward the next vowel in the final third.
        double f1 = s.f1, f2 = s.f2, f3 = s.f3;
        if (next && next->kind == Segment::kVowel && t > 0.66) {
          const double g = (t - 0.66) / 0.34;
          f1 += g * (next->f1 - s.f1);
          f2 += g * (next->f2 - s.f2);
          f3 += g * (next->f3 - s.f3);
        }
        f1 *= formant_scale * jitter;
        f2 *= formant_scale * jitter;
        f3 *= formant_scale;
        const double pitch = f0 * (1.0 + s.pitch_slope * t);
        for (std::size_t h = 1; h < phase.size(); ++h) {
          const double fh = pitch * static_cast<double>(h);
          if (fh > 7000.0) break;
          phase[h] += kTwoPi * fh / kRate;
          if (phase[h] > kTwoPi) phase[h] -= kTwoPi;
          const double amp = formant_gain(fh, f1) + 0.7 * formant_gain(fh, f2) +
                             0.35 * formant_gain(fh, f3);
          v += amp * std::sin(phase[h]) / std::sqrt(static_cast<double>(h));
        }
        v *= 0.35;
      } else if (s.kind == Segment::kFricative) {
        v = 1.4 * fric.step(rng.uniform(-1.0, 1.0));
      } else {
        v = rng.uniform(-1.0, 1.0) * std::exp(-6.0 * t);
      }
      out[pos] += static_cast<float>(gain * env * v);
    }
  }
}

void write_list(const fs::path& path, const std::vector<std::string>& items) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIoError, "cannot write " + path.string());
  for (const auto& item : items) out << item << '\n';
}

dsp::AudioClip make_clip(std::vector<float> samples) {
  for (auto& s : samples) s = std::clamp(s, -0.999f, 0.999f);
  dsp::AudioClip clip;
  clip.samples = std::move(samples);
  return clip;
}

// Normalizes to a target RMS, then clamps.
void set_rms(std::vector<float>& x, double rms) {
  const double p = signal_power(x);
  if (!std::isfinite(p)) fail(ErrorCode::kInternal, "synthesized signal is not finite");
  if (p <= 0.0) return;
  const double g = rms / std::sqrt(p);
  for (auto& s : x) s = static_cast<float>(s * g);
}

std::vector<float> babble(std::size_t n, std::uint64_t seed, int streams) {
  std::vector<float> out(n, 0.0f);
  Rng rng(seed);
  for (int s = 0; s < streams; ++s) {
    std::size_t pos = rng.uniform_index(8000);
    while (pos < n) {
      const auto word = kVocabulary[rng.uniform_index(kVocabulary.size())];
      const double f0 = rng.uniform(90, 240);
      render_word(out, pos, word_plan(word), f0, rng.uniform(0.88, 1.15),
                  rng.uniform(0.8, 1.25), 0.3, rng);
      pos += 5000 + rng.uniform_index(7000);
    }
  }
  return out;
}

void add_pink(std::vector<float>& x, double level, std::uint64_t seed) {
  const auto p = pink_noise(x.size(), seed);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += static_cast<float>(level * p.samples[i]);
}

std::vector<float> office(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<float> out(n, 0.0f);
  add_pink(out, 0.3, derive_seed(seed, "office-floor"));
  // Keyboard clicks in bursts.
  std::size_t pos = 0;
  while (pos < n) {
    const std::size_t burst = 3 + rng.uniform_index(10);
    for (std::size_t k = 0; k < burst && pos < n; ++k) {
      BandPass bp(rng.uniform(2500, 5000), 4.0);
      for (std::size_t i = 0; i < 200 && pos + i < n; ++i) {
        const double env = std::exp(-static_cast<double>(i) / 30.0);
        out[pos + i] += static_cast<float>(2.0 * bp.step(rng.uniform(-1, 1)) * env);
      }
      pos += 1200 + rng.uniform_index(2500);
    }
    pos += 8000 + rng.uniform_index(16000);
  }
  // Distant talkers.
  const auto talk = babble(n, derive_seed(seed, "office-talk"), 1);
  for (std::size_t i = 0; i < n; ++i) out[i] += 0.3f * talk[i];
  return out;
}

std::vector<float> kitchen(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<float> out(n, 0.0f);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / kRate;
    out[i] = static_cast<float>(0.05 * std::sin(kTwoPi * 120 * t) + 0.03 * std::sin(kTwoPi * 240 * t));
  }
  BandPass water(1800, 0.8);
  for (std::size_t i = 0; i < n; ++i) out[i] += static_cast<float>(0.15 * water.step(rng.uniform(-1, 1)));
  std::size_t pos = rng.uniform_index(8000);
  while (pos < n) {
    const double f = rng.uniform(1500, 6000);
    const double decay = rng.uniform(0.02, 0.15) * kRate;
    const double amp = rng.uniform(0.2, 0.6);
    for (std::size_t i = 0; i < 6000 && pos + i < n; ++i) {
      const double env = std::exp(-static_cast<double>(i) / decay);
      out[pos + i] += static_cast<float>(amp * std::sin(kTwoPi * f * i / kRate) * env);
    }
    pos += 3000 + rng.uniform_index(20000);
  }
  return out;
}

std::vector<float> music(std::size_t n, std::uint64_t seed, double drums) {
  Rng rng(seed);
  std::vector<float> out(n, 0.0f);
  const double beat = rng.uniform(0.22, 0.32) * kRate;
  const std::array<double, 7> scale = {0, 2, 4, 5, 7, 9, 11};
  const double root = rng.uniform(180, 260);
  std::size_t step = 0;
  for (double pos = 0; pos < static_cast<double>(n); pos += beat, ++step) {
    const auto p = static_cast<std::size_t>(pos);
    const double note = root * std::pow(2.0, (scale[rng.uniform_index(7)] + 12 * rng.uniform_index(2)) / 12.0);
    const double bass = root / 2 * std::pow(2.0, scale[(step / 4) % 4 * 2 % 7] / 12.0);
    for (std::size_t i = 0; i < static_cast<std::size_t>(beat * 2) && p + i < n; ++i) {
      const double t = static_cast<double>(i) / kRate;
      double v = 0;
      for (int h = 1; h <= 6; ++h) v += std::sin(kTwoPi * note * h * t) / (h * h);
      v *= 0.4 * std::exp(-t * 5.0);
      if (step % 2 == 0) v += 0.3 * std::sin(kTwoPi * bass * t) * std::exp(-t * 3.0);
      out[p + i] += static_cast<float>(v);
    }
    if (drums > 0 && step % 2 == 0) {
      for (std::size_t i = 0; i < 1500 && p + i < n; ++i) {
        out[p + i] += static_cast<float>(drums * rng.uniform(-1, 1) * std::exp(-static_cast<double>(i) / 250.0));
      }
    }
  }
  return out;
}

std::vector<float> living_room(std::size_t n, std::uint64_t seed) {
  auto talk = babble(n, derive_seed(seed, "tv"), 2);
  OnePoleLowPass lp(2500);
  for (auto& s : talk) s = static_cast<float>(lp.step(s));
  const auto tune = music(n, derive_seed(seed, "tv-music"), 0.0);
  for (std::size_t i = 0; i < n; ++i) talk[i] += 0.4f * tune[i];
  add_pink(talk, 0.05, derive_seed(seed, "room"));
  return talk;
}

std::vector<float> car_horn(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<float> out(n, 0.0f);
  OnePoleLowPass rumble(150);
  for (auto& s : out) s = static_cast<float>(0.6 * rumble.step(rng.uniform(-1, 1)));
  std::size_t pos = rng.uniform_index(4000);
  while (pos < n) {
    const auto len = static_cast<std::size_t>(rng.uniform(0.25, 1.1) * kRate);
    const double fa = rng.uniform(380, 440);
    const double fb = fa * rng.uniform(1.18, 1.26);
    for (std::size_t i = 0; i < len && pos + i < n; ++i) {
      const double t = static_cast<double>(i) / kRate;
      double v = 0;
      for (int h = 1; h <= 11; h += 2) {
        v += (std::sin(kTwoPi * fa * h * t) + std::sin(kTwoPi * fb * h * t)) / h;
      }
      const double env = std::min(1.0, std::min(i / 200.0, (len - i) / 200.0));
      out[pos + i] += static_cast<float>(0.25 * env * v);
    }
    pos += len + static_cast<std::size_t>(rng.uniform(0.05, 0.9) * kRate);
  }
  return out;
}

std::vector<float> dog_bark(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<float> out(n, 0.0f);
  add_pink(out, 0.02, derive_seed(seed, "yard"));
  std::size_t pos = rng.uniform_index(4000);
  while (pos < n) {
    const std::size_t barks = 1 + rng.uniform_index(4);
    for (std::size_t b = 0; b < barks && pos < n; ++b) {
      const auto len = static_cast<std::size_t>(rng.uniform(0.1, 0.28) * kRate);
      const double f0 = rng.uniform(320, 700);
      BandPass rasp(rng.uniform(900, 2500), 1.2);
      for (std::size_t i = 0; i < len && pos + i < n; ++i) {
        const double t = static_cast<double>(i) / kRate;
        const double pitch = f0 * (1.0 + 0.3 * std::exp(-t * 20.0));
        double v = 0;
        for (int h = 1; h <= 8; ++h) v += std::sin(kTwoPi * pitch * h * t) / h;
        v = 0.5 * v + 1.5 * rasp.step(rng.uniform(-1, 1));
        const double env = std::min(1.0, i / 80.0) * std::exp(-t * 10.0);
        out[pos + i] += static_cast<float>(0.5 * env * v);
      }
      pos += len + static_cast<std::size_t>(rng.uniform(0.12, 0.35) * kRate);
    }
    pos += static_cast<std::size_t>(rng.uniform(0.3, 2.0) * kRate);
  }
  return out;
}

}  // namespace

dsp::AudioClip synthesize_word(std::string_view word, std::uint64_t speaker_seed,
                               std::uint64_t take_seed) {
  Rng speaker(speaker_seed);
  const double f0 = speaker.uniform(85, 255);
  const double formant_scale = speaker.uniform(0.88, 1.15);
  const double tempo_base = speaker.uniform(0.85, 1.2);
  const double gain_base = speaker.uniform(0.08, 0.4);

  Rng take(take_seed);
  std::size_t length = dsp::kClipSamples;
  if (take.uniform01() < 0.2) length = 11000 + take.uniform_index(5000);
  std::vector<float> samples(length, 0.0f);
  const auto plan = word_plan(word);
  double dur = 0;
  for (const auto& s : plan) dur += s.duration;
  const double tempo = tempo_base * take.uniform(0.92, 1.08);
  const double span_s = dur / tempo;
  const double latest = std::max(0.0, static_cast<double>(length) / kRate - span_s - 0.02);
  const auto start = static_cast<std::size_t>(take.uniform(0.0, std::min(latest, 0.4)) * kRate);
  render_word(samples, start, plan, f0 * take.uniform(0.95, 1.05), formant_scale,
              tempo, gain_base * take.uniform(0.7, 1.3), take);
  // Recording noise floor.
  for (auto& s : samples) s += static_cast<float>(0.0015 * take.normal());
  return make_clip(std::move(samples));
}

void synthesize_corpus(const fs::path& root, const SynthCorpusConfig& cfg) {
  if (cfg.speakers == 0) fail(ErrorCode::kConfigInvalid, "need at least one speaker");
  fs::create_directories(root);
  Rng rng(cfg.seed);
  std::vector<std::uint64_t> speakers(cfg.speakers);
  for (auto& s : speakers) s = rng.next_u64();

  std::vector<std::string> val, test;
  for (auto word : kVocabulary) {
    const bool keyword = assign_class(word).index < kUnknownIndex;
    const std::size_t clips = keyword ? cfg.keyword_clips : cfg.other_clips;
    const fs::path dir = root / std::string(word);
    fs::create_directories(dir);
    std::vector<std::size_t> takes(cfg.speakers, 0);
    Rng pick(derive_seed(cfg.seed, word));
    for (std::size_t i = 0; i < clips; ++i) {
      const std::size_t sp = pick.uniform_index(cfg.speakers);
      const std::string name = hex32(static_cast<std::uint32_t>(speakers[sp])) +
                               "_nohash_" + std::to_string(takes[sp]++) + ".wav";
      const auto clip = synthesize_word(word, speakers[sp], pick.next_u64());
      dsp::write_wav(dir / name, clip);
      const std::string rel = std::string(word) + "/" + name;
      switch (speakers[sp] % 10) {
        case 0: test.push_back(rel); break;
        case 1: val.push_back(rel); break;
        default: break;
      }
    }
  }
  write_list(root / "validation_list.txt", val);
  write_list(root / "testing_list.txt", test);

  const fs::path bg = root / std::string(kBackgroundNoiseDir);
  fs::create_directories(bg);
  const auto n = static_cast<std::size_t>(cfg.background_seconds * kRate);
  auto white = white_noise(n, derive_seed(cfg.seed, "bg-white")).samples;
  set_rms(white, 0.02);
  dsp::write_wav(bg / "white_noise.wav", make_clip(std::move(white)));
  auto pink = pink_noise(n, derive_seed(cfg.seed, "bg-pink")).samples;
  set_rms(pink, 0.03);
  dsp::write_wav(bg / "pink_noise.wav", make_clip(std::move(pink)));
  auto tap = kitchen(n, derive_seed(cfg.seed, "bg-tap"));
  set_rms(tap, 0.03);
  dsp::write_wav(bg / "running_tap.wav", make_clip(std::move(tap)));
  auto bike = music(n, derive_seed(cfg.seed, "bg-bike"), 0.0);
  set_rms(bike, 0.01);
  dsp::write_wav(bg / "exercise_bike.wav", make_clip(std::move(bike)));
}

void synthesize_noise_dir(const fs::path& dir, std::uint64_t seed, double seconds) {
  fs::create_directories(dir);
  const auto n = static_cast<std::size_t>(seconds * kRate);
  const auto emit = [&](const char* name, std::vector<float> x) {
    set_rms(x, 0.1);
    dsp::write_wav(dir / (std::string(name) + ".wav"), make_clip(std::move(x)));
  };
  emit("babble", babble(n, derive_seed(seed, "babble"), 6));
  emit("office", office(n, derive_seed(seed, "office")));
  emit("kitchen", kitchen(n, derive_seed(seed, "kitchen")));
  emit("living_room", living_room(n, derive_seed(seed, "living_room")));
  emit("car_horn", car_horn(n, derive_seed(seed, "car_horn")));
  emit("dog_bark", dog_bark(n, derive_seed(seed, "dog_bark")));
  emit("street_music", music(n, derive_seed(seed, "street_music"), 0.35));
}

}  // namespace nkws::data
