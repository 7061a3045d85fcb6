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

#ifndef NOISEKWS_BENCH_PROFILE_HPP_
#define NOISEKWS_BENCH_PROFILE_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "common/kv_config.hpp"
#include "dataset/sets.hpp"
#include "nn/model.hpp"
#include "train/trainer.hpp"

namespace nkws::bench {

// Every knob of an experiment run. "paper" is the full protocol; "desk" is
// the reduced protocol the acceptance tests use.
struct Profile {
  std::string name;
  nn::ArchSpec arch;
  train::TrainConfig train;
  data::DataProfile data;
  double adapt_lr = 1e-4;
  std::vector<std::uint64_t> sweep_seeds;
  std::vector<int> fig6_snrs;
  std::vector<int> fig6_shots = {1, 5};

  static Profile paper();
  static Profile desk();

  // Keys: arch.channels, arch.kernel, train.lr0, train.beta1, train.beta2,
  // train.eps, train.batch_size, train.max_epochs, train.plateau_factor,
  // train.plateau_patience, data.classes, data.max_train_per_class,
  // data.max_val_per_class, data.max_test_per_class, adapt.lr,
  // experiment.seeds, experiment.fig6_snrs, experiment.fig6_shots.
  // Unknown keys throw ConfigInvalid.
  void apply(const KvConfig& overrides);
  KvConfig to_config() const;
};

// "paper" or "desk"; throws Usage otherwise.
Profile make_profile(std::string_view name);

}  // namespace nkws::bench

#endif  // NOISEKWS_BENCH_PROFILE_HPP_
