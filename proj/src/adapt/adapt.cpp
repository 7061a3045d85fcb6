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

#include "adapt/adapt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <tuple>

#include "common/checksum.hpp"
#include "common/error.hpp"
#include "common/rng.hpp"
#include "nn/layers.hpp"

namespace nkws::adapt {

void AdaptConfig::validate() const {
  if (shots_per_class < 1 || shots_per_class > 5) {
    fail(ErrorCode::kConfigInvalid, "shots per class must be in 1..5");
  }
  if (epochs < 1 || epochs > 5) fail(ErrorCode::kConfigInvalid, "adaptation epochs must be in 1..5");
  if (!(lr >= 0.0) || !std::isfinite(lr)) {
    fail(ErrorCode::kConfigInvalid, "adaptation lr must be finite and >= 0");
  }
}

nn::ModelParams<float> AdaptedModel::materialize() const {
  nn::ModelParams<float> out = *base;
  out.fc_weights() = fc_weights;
  out.fc_bias() = fc_bias;
  return out;
}

nn::Provenance AdaptedModel::provenance(std::uint32_t base_checksum) const {
  char lr[32];
  std::snprintf(lr, sizeof lr, "%.17g", config.lr);
  return {{"kind", "adapted"},
          {"base_checksum", hex32(base_checksum)},
          {"noise_source", condition.source},
          {"snr_db", std::to_string(condition.snr_db)},
          {"shots", std::to_string(config.shots_per_class)},
          {"epochs", std::to_string(config.epochs)},
          {"seed", std::to_string(seed)},
          {"lr", lr},
          {"steps", std::to_string(steps)}};
}

nn::Tensor<float> extract_features(const nn::ModelParams<float>& params,
                                   const nn::ArchSpec& arch, const nn::Tensor<float>& batch) {
  return nn::model_features(params, arch, batch);
}

template <typename T>
void fc_sgd_step(nn::Tensor<T>& weights, nn::Tensor<T>& bias, std::span<const T> features,
                 int label, double lr) {
  nn::expect_rank(weights, 2, "fc weights");
  const std::size_t k = weights.dim(0);
  const std::size_t c = weights.dim(1);
  nn::expect_dims(bias, {k}, "fc bias");
  if (features.size() != c) {
    fail(ErrorCode::kShapeMismatch, "feature length " + std::to_string(features.size()) +
                                        " does not match fc input " + std::to_string(c));
  }
  if (label < 0 || static_cast<std::size_t>(label) >= k) {
    fail(ErrorCode::kInvalidArgument, "label out of range");
  }
  std::vector<double> p(k);
  for (std::size_t j = 0; j < k; ++j) {
    double z = static_cast<double>(bias[j]);
    for (std::size_t i = 0; i < c; ++i) {
      z += static_cast<double>(weights[j * c + i]) * static_cast<double>(features[i]);
    }
    p[j] = z;
  }
  const double zmax = *std::max_element(p.begin(), p.end());
  double sum = 0.0;
  for (auto& v : p) sum += (v = std::exp(v - zmax));
  for (auto& v : p) v /= sum;
  p[static_cast<std::size_t>(label)] -= 1.0;

  for (std::size_t j = 0; j < k; ++j) {
    if (p[j] == 0.0) continue;
    const double step = lr * p[j];
    for (std::size_t i = 0; i < c; ++i) {
      weights[j * c + i] = static_cast<T>(static_cast<double>(weights[j * c + i]) -
                                          step * static_cast<double>(features[i]));
    }
    bias[j] = static_cast<T>(static_cast<double>(bias[j]) - step);
  }
}

template void fc_sgd_step(nn::Tensor<float>&, nn::Tensor<float>&, std::span<const float>, int,
                          double);
template void fc_sgd_step(nn::Tensor<double>&, nn::Tensor<double>&, std::span<const double>,
                          int, double);

namespace {

AdaptedModel start_from(std::shared_ptr<const nn::ModelParams<float>> base,
                        const data::NoiseCondition& condition, const AdaptConfig& cfg,
                        std::uint64_t seed) {
  if (!base) fail(ErrorCode::kInvalidArgument, "adapt needs a base model");
  cfg.validate();
  AdaptedModel out;
  out.fc_weights = base->fc_weights();
  out.fc_bias = base->fc_bias();
  out.base = std::move(base);
  out.condition = condition;
  out.config = cfg;
  out.seed = seed;
  return out;
}

void run_epoch(AdaptedModel& model, const nn::Tensor<float>& features,
               std::span<const int> labels, int epoch) {
  if (labels.empty()) return;
  nn::expect_rank(features, 2, "shot features");
  if (features.dim(0) != labels.size()) {
    fail(ErrorCode::kShapeMismatch, "shot feature count disagrees with labels");
  }
  const std::size_t c = features.dim(1);
  std::vector<std::size_t> order(labels.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(model.seed, "adapt-order", static_cast<std::uint64_t>(epoch)));
  rng.shuffle(std::span<std::size_t>(order));
  for (std::size_t i : order) {
    fc_sgd_step<float>(model.fc_weights, model.fc_bias, {features.data() + i * c, c}, labels[i],
                       model.config.lr);
    ++model.steps;
  }
}

}  // namespace

AdaptedModel adapt_features(std::shared_ptr<const nn::ModelParams<float>> base,
                            const nn::Tensor<float>& features, std::span<const int> labels,
                            const data::NoiseCondition& condition, const AdaptConfig& cfg,
                            std::uint64_t seed) {
  AdaptedModel model = start_from(std::move(base), condition, cfg, seed);
  for (int e = 1; e <= cfg.epochs; ++e) run_epoch(model, features, labels, e);
  return model;
}

AdaptedModel adapt(std::shared_ptr<const nn::ModelParams<float>> base, const nn::ArchSpec& arch,
                   const train::FeatureSet& shots, const data::NoiseCondition& condition,
                   const AdaptConfig& cfg, std::uint64_t seed, const AdaptOptions& options) {
  AdaptedModel model = start_from(std::move(base), condition, cfg, seed);
  if (shots.size() == 0) return model;
  const auto batch = shots.all();
  nn::Tensor<float> features = extract_features(*model.base, arch, batch);
  for (int e = 1; e <= cfg.epochs; ++e) {
    if (options.recompute_features && e > 1) features = extract_features(*model.base, arch, batch);
    run_epoch(model, features, shots.labels, e);
  }
  return model;
}

std::vector<int> predict_from_features(const nn::Tensor<float>& weights,
                                       const nn::Tensor<float>& bias,
                                       const nn::Tensor<float>& features) {
  const auto logits = nn::fc_forward(features, weights, bias);
  const std::size_t k = logits.dim(1);
  std::vector<int> out(logits.dim(0));
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = train::argmax_class({logits.data() + i * k, k});
  }
  return out;
}

std::vector<SweepRow> adaptation_sweep(std::shared_ptr<const nn::ModelParams<float>> base,
                                       const nn::ArchSpec& arch, const train::DataInputs& in,
                                       const SweepSpec& spec) {
  if (!base) fail(ErrorCode::kInvalidArgument, "sweep needs a base model");
  for (int s : spec.shots) AdaptConfig{s, 1, spec.lr}.validate();
  for (int e : spec.epochs) AdaptConfig{1, e, spec.lr}.validate();
  if (spec.sources.empty() || spec.adapt_snrs.empty() || spec.seeds.empty()) {
    fail(ErrorCode::kConfigInvalid, "adaptation sweep grid is empty");
  }

  struct TestCache {
    nn::Tensor<float> features;
    std::vector<int> labels;
    double before = 0.0;
  };
  std::map<std::pair<std::string, int>, TestCache> tests;
  const auto test_set = [&](const std::string& source, int snr) -> const TestCache& {
    auto key = std::make_pair(source, snr);
    auto it = tests.find(key);
    if (it != tests.end()) return it->second;
    const auto set = train::condition_features(in, data::Split::kTest,
                                               data::make_condition(source, snr), spec.data_seed);
    TestCache cache;
    cache.features = extract_features(*base, arch, set.all());
    cache.labels = set.labels;
    cache.before = train::accuracy_row(
                       predict_from_features(base->fc_weights(), base->fc_bias(), cache.features),
                       cache.labels)
                       .accuracy;
    return tests.emplace(key, std::move(cache)).first->second;
  };

  std::vector<SweepRow> rows;
  for (const auto& source : spec.sources) {
    for (int adapt_snr : spec.adapt_snrs) {
      const auto cond = data::make_condition(source, adapt_snr);
      for (int shots : spec.shots) {
        for (std::uint64_t seed : spec.seeds) {
          const auto shot_set = data::sample_shots(in.index, cond, shots,
                                                   derive_seed(seed, "shots"), in.profile);
          const auto shot_feats = train::featurize(shot_set.items, in.loader, in.frontend);
          const auto features = extract_features(*base, arch, shot_feats.all());
          for (int epochs : spec.epochs) {
            const AdaptConfig cfg{shots, epochs, spec.lr};
            const auto model = adapt_features(base, features, shot_feats.labels, cond, cfg,
                                              derive_seed(seed, "adapt"));
            const std::vector<int> test_snrs =
                spec.test_snrs.empty() ? std::vector<int>{adapt_snr} : spec.test_snrs;
            for (int test_snr : test_snrs) {
              const auto& t = test_set(source, test_snr);
              SweepRow row;
              row.source = source;
              row.adapt_snr_db = adapt_snr;
              row.test_snr_db = test_snr;
              row.shots = shots;
              row.epochs = epochs;
              row.seed = seed;
              row.accuracy_before = t.before;
              row.accuracy_after =
                  train::accuracy_row(
                      predict_from_features(model.fc_weights, model.fc_bias, t.features), t.labels)
                      .accuracy;
              row.n_examples = t.labels.size();
              rows.push_back(row);
            }
          }
        }
      }
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::tie(a.source, a.adapt_snr_db, a.shots, a.epochs, a.seed, a.test_snr_db) <
           std::tie(b.source, b.adapt_snr_db, b.shots, b.epochs, b.seed, b.test_snr_db);
  });
  return rows;
}

}  // namespace nkws::adapt
