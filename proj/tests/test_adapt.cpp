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

#include <cmath>
#include <memory>

#include "adapt/adapt.hpp"
#include "common/rng.hpp"
#include "dataset/corpus.hpp"
#include "doctest.h"
#include "nn/layers.hpp"
#include "support.hpp"

namespace nkws::adapt {
namespace {

using nn::Tensor;

template <typename T>
Tensor<T> random_tensor(Rng& rng, nn::Dims dims, double scale = 1.0) {
  Tensor<T> t(std::move(dims));
  for (auto& v : t.values()) v = static_cast<T>(rng.uniform(-scale, scale));
  return t;
}

nn::ArchSpec tiny_arch() {
  auto a = nn::ArchSpec::with_channels({3, 4, 4, 5, 6});
  a.input_height = 9;
  a.input_width = 7;
  return a;
}

// shots examples of each of the twelve classes.
train::FeatureSet shot_set(int shots, std::uint64_t seed) {
  Rng rng(seed);
  train::FeatureSet set;
  set.rows = 9;
  set.cols = 7;
  for (int s = 0; s < shots; ++s) {
    for (int k = 0; k < 12; ++k) {
      for (int i = 0; i < 63; ++i) set.data.push_back(static_cast<float>(rng.uniform(-1.0, 1.0)));
      set.labels.push_back(k);
    }
  }
  return set;
}

std::shared_ptr<const nn::ModelParams<float>> base_model(std::uint64_t seed) {
  auto p = nn::init_params(tiny_arch(), seed);
  // Non-default running statistics make the frozen-scope check meaningful.
  Rng rng(seed + 99);
  for (std::size_t b = 0; b < 5; ++b) {
    for (auto& v : p.bn_running_mean(b).values()) v = static_cast<float>(rng.uniform(-0.2, 0.2));
    for (auto& v : p.bn_running_var(b).values()) v = static_cast<float>(rng.uniform(0.5, 2.0));
  }
  return std::make_shared<const nn::ModelParams<float>>(std::move(p));
}

const data::NoiseCondition kCond = data::make_condition("car_horn", -3);

}  // namespace

TEST_SUITE("adapt") {
  TEST_CASE("config bounds") {
    CHECK_NOTHROW(AdaptConfig{1, 1, 1e-4}.validate());
    CHECK_NOTHROW(AdaptConfig{5, 5, 0.0}.validate());
    NKWS_CHECK_ERROR(AdaptConfig({0, 1, 1e-4}).validate(), ErrorCode::kConfigInvalid);
    NKWS_CHECK_ERROR(AdaptConfig({6, 1, 1e-4}).validate(), ErrorCode::kConfigInvalid);
    NKWS_CHECK_ERROR(AdaptConfig({1, 6, 1e-4}).validate(), ErrorCode::kConfigInvalid);
    NKWS_CHECK_ERROR(AdaptConfig({1, 1, -1.0}).validate(), ErrorCode::kConfigInvalid);
  }

  TEST_CASE("zero learning rate is a no-op") {
    Rng rng(1);
    auto w = random_tensor<float>(rng, {12, 6});
    auto b = random_tensor<float>(rng, {12});
    const auto w0 = w, b0 = b;
    const auto f = random_tensor<float>(rng, {6});
    fc_sgd_step<float>(w, b, f.values(), 3, 0.0);
    CHECK(w == w0);
    CHECK(b == b0);

    const auto base = base_model(1);
    const auto adapted = adapt(base, tiny_arch(), shot_set(2, 3), kCond, {2, 3, 0.0}, 5);
    CHECK(adapted.fc_weights == base->fc_weights());
    CHECK(adapted.fc_bias == base->fc_bias());
  }

  TEST_CASE("a confident correct prediction gives a zero update") {
    Rng rng(2);
    auto w = random_tensor<double>(rng, {12, 6}, 0.1);
    Tensor<double> b({12});
    b[7] = 1000.0;
    const auto w0 = w, b0 = b;
    fc_sgd_step<double>(w, b, random_tensor<double>(rng, {6}).values(), 7, 0.5);
    CHECK(w == w0);
    CHECK(b == b0);
  }

  TEST_CASE("closed-form update equals the generic backward path") {
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      Rng rng(1000 + seed);
      const std::size_t c = 1 + rng.uniform_index(64);
      auto w = random_tensor<double>(rng, {12, c});
      auto b = random_tensor<double>(rng, {12});
      const auto f = random_tensor<double>(rng, {1, c}, 2.0);
      const int label = static_cast<int>(rng.uniform_index(12));
      const double lr = rng.uniform(1e-5, 0.5);

      const auto logits = nn::fc_forward(f, w, b);
      const auto loss = nn::softmax_cross_entropy(logits, std::vector<int>{label});
      const auto g = nn::fc_backward(f, w, loss.grad_logits);
      auto w_ref = w, b_ref = b;
      for (std::size_t i = 0; i < w.size(); ++i) w_ref[i] -= lr * g.weights[i];
      for (std::size_t i = 0; i < 12; ++i) b_ref[i] -= lr * g.bias[i];

      fc_sgd_step<double>(w, b, f.values(), label, lr);
      for (std::size_t i = 0; i < w.size(); ++i) worst = std::max(worst, std::abs(w[i] - w_ref[i]));
      for (std::size_t i = 0; i < 12; ++i) worst = std::max(worst, std::abs(b[i] - b_ref[i]));
    }
    CHECK(worst < 1e-6);
  }

  TEST_CASE("step count is shots x 12 x epochs") {
    const auto base = base_model(2);
    for (auto [shots, epochs] : {std::pair{1, 1}, {5, 5}, {3, 2}}) {
      const auto m = adapt(base, tiny_arch(), shot_set(shots, 4), kCond, {shots, epochs, 1e-3}, 1);
      CHECK(m.steps == static_cast<std::size_t>(shots * 12 * epochs));
    }
  }

  TEST_CASE("only the fc layer changes") {
    const auto base = base_model(3);
    const nn::ModelParams<float> snapshot = *base;
    const auto m = adapt(base, tiny_arch(), shot_set(3, 5), kCond, {3, 4, 0.05}, 7);
    const auto full = m.materialize();
    bool fc_changed = false;
    for (std::size_t i = 0; i < full.tensors.size(); ++i) {
      if (full.is_fc(i)) {
        fc_changed = fc_changed || !(full.tensors[i] == snapshot.tensors[i]);
      } else {
        CHECK_MESSAGE(full.tensors[i] == snapshot.tensors[i], full.names[i]);
      }
    }
    CHECK(fc_changed);
    CHECK(*base == snapshot);
  }

  TEST_CASE("cached features give the same result as recomputation") {
    const auto base = base_model(4);
    const auto shots = shot_set(2, 6);
    const AdaptConfig cfg{2, 3, 0.01};
    const auto cached = adapt(base, tiny_arch(), shots, kCond, cfg, 11);
    const auto fresh = adapt(base, tiny_arch(), shots, kCond, cfg, 11, {true});
    CHECK(cached.fc_weights == fresh.fc_weights);
    CHECK(cached.fc_bias == fresh.fc_bias);
    const auto feats = extract_features(*base, tiny_arch(), shots.all());
    CHECK(feats.dims() == nn::Dims{24, 6});
    const auto direct = adapt_features(base, feats, shots.labels, kCond, cfg, 11);
    CHECK(direct.fc_weights == cached.fc_weights);

    const auto again = adapt(base, tiny_arch(), shots, kCond, cfg, 11);
    CHECK(again.fc_weights == cached.fc_weights);
    const auto other = adapt(base, tiny_arch(), shots, kCond, cfg, 12);
    CHECK_FALSE(other.fc_weights == cached.fc_weights);

    // Features come from infer-mode batch norm, so they are per-example.
    const auto one = extract_features(*base, tiny_arch(),
                                      Tensor<float>({1, 1, 9, 7}, {shots.example(5).begin(),
                                                                   shots.example(5).end()}));
    for (std::size_t i = 0; i < 6; ++i) CHECK(one[i] == feats[5 * 6 + i]);
  }

  TEST_CASE("provenance records the adaptation") {
    const auto base = base_model(5);
    const auto m = adapt(base, tiny_arch(), shot_set(1, 1), kCond, {1, 1, 1e-4}, 3);
    const auto p = m.provenance(0xdeadbeef);
    CHECK(p.at("noise_source") == "car_horn");
    CHECK(p.at("snr_db") == "-3");
    CHECK(p.at("shots") == "1");
    CHECK(p.at("epochs") == "1");
    CHECK(p.at("steps") == "12");
    CHECK(p.at("seed") == "3");
    CHECK(p.contains("base_checksum"));
    CHECK(p.contains("lr"));
  }

  TEST_CASE("adaptation sweep over a small corpus") {
    auto index = data::scan_corpus(testing::tiny_corpus());
    data::add_silence_entries(index, 1);
    auto bank = std::make_shared<data::NoiseBank>(index.root / "_noise_sources_");
    data::ClipLoader loader(index.root, bank);
    dsp::LogMelFrontend frontend;
    data::DataProfile profile;
    profile.classes = {2, 3, 10, 11};
    profile.max_test_per_class = 6;
    const train::DataInputs in{index, loader, frontend, profile};

    auto arch = nn::ArchSpec::with_channels({2, 2, 2, 2, 3});
    const auto base = std::make_shared<const nn::ModelParams<float>>(nn::init_params(arch, 1));
    SweepSpec spec;
    spec.sources = {"dog_bark", "car_horn"};
    spec.adapt_snrs = {0, -3};
    spec.test_snrs = {24, -3};
    spec.seeds = {2, 1};
    spec.lr = 0.01;
    const auto rows = adaptation_sweep(base, arch, in, spec);
    REQUIRE(rows.size() == 2 * 2 * 2 * 2);
    CHECK(rows.front().source == "car_horn");
    CHECK(rows.front().adapt_snr_db == -3);
    CHECK(rows.front().seed == 1);
    CHECK(rows.front().test_snr_db == -3);
    for (const auto& r : rows) {
      CHECK(r.n_examples == rows.front().n_examples);
      CHECK(r.accuracy_after >= 0.0);
      CHECK(r.accuracy_after <= 1.0);
    }
    // The before score is the untouched model on the same noisy test split.
    const auto test = train::condition_features(in, data::Split::kTest,
                                                data::make_condition("car_horn", -3), spec.data_seed);
    CHECK(rows.front().n_examples == test.size());
    CHECK(rows.front().accuracy_before == train::evaluate(*base, arch, test).accuracy);

    spec.shots = {6};
    NKWS_CHECK_ERROR(adaptation_sweep(base, arch, in, spec), ErrorCode::kConfigInvalid);
  }
}

}  // namespace nkws::adapt
