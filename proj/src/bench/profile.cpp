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

#include "bench/profile.hpp"

#include <cstdio>
#include <set>

#include "common/error.hpp"
#include "dataset/labels.hpp"

namespace nkws::bench {
namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ",") + s;
  return out;
}

template <typename Int>
std::string join_ints(const std::vector<Int>& items) {
  std::vector<std::string> s;
  for (auto v : items) s.push_back(std::to_string(v));
  return join(s);
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "arch.channels",        "arch.kernel",          "train.lr0",
      "train.beta1",          "train.beta2",          "train.eps",
      "train.batch_size",     "train.max_epochs",     "train.plateau_factor",
      "train.plateau_patience", "data.classes",       "data.max_train_per_class",
      "data.max_val_per_class", "data.max_test_per_class", "adapt.lr",
      "experiment.seeds",     "experiment.fig6_snrs", "experiment.fig6_shots"};
  return keys;
}

std::size_t non_negative(long long v, const std::string& key) {
  if (v < 0) fail(ErrorCode::kConfigInvalid, key + " must be >= 0");
  return static_cast<std::size_t>(v);
}

}  // namespace

Profile Profile::paper() {
  Profile p;
  p.name = "paper";
  p.arch = nn::ArchSpec::fallback();
  p.sweep_seeds = {1, 2, 3, 4, 5};
  p.fig6_snrs = {-3, 0, 6, 12, 24};
  return p;
}

Profile Profile::desk() {
  Profile p = paper();
  p.name = "desk";
  p.train.max_epochs = 10;
  // Ten epochs at 1e-4 leave the fallback net near 50 % clean accuracy.
  p.train.adam.lr0 = 1e-3;
  p.data.classes = {data::class_from_name("Yes").index, data::class_from_name("No").index,
                    data::class_from_name("Up").index, data::kUnknownIndex,
                    data::kSilenceIndex};
  p.data.max_train_per_class = 80;
  p.data.max_val_per_class = 40;
  p.data.max_test_per_class = 40;
  p.fig6_snrs = {-3, 0, 24};
  return p;
}

void Profile::apply(const KvConfig& cfg) {
  for (const auto& [key, value] : cfg.entries()) {
    if (!known_keys().contains(key)) fail(ErrorCode::kConfigInvalid, "unknown config key '" + key + "'");
  }
  if (cfg.has("arch.channels") || cfg.has("arch.kernel")) {
    std::vector<int> channels;
    for (const auto& b : arch.blocks) channels.push_back(b.out_channels);
    channels = cfg.get_int_list("arch.channels", channels);
    const int kernel = static_cast<int>(cfg.get_int("arch.kernel", arch.blocks.at(0).kernel_h));
    arch = nn::ArchSpec::with_channels(channels, kernel);
  }
  train.adam.lr0 = cfg.get_double("train.lr0", train.adam.lr0);
  train.adam.beta1 = cfg.get_double("train.beta1", train.adam.beta1);
  train.adam.beta2 = cfg.get_double("train.beta2", train.adam.beta2);
  train.adam.eps = cfg.get_double("train.eps", train.adam.eps);
  train.batch_size = non_negative(
      cfg.get_int("train.batch_size", static_cast<long long>(train.batch_size)), "train.batch_size");
  train.max_epochs = static_cast<int>(cfg.get_int("train.max_epochs", train.max_epochs));
  train.plateau.factor = cfg.get_double("train.plateau_factor", train.plateau.factor);
  train.plateau.patience_epochs =
      static_cast<int>(cfg.get_int("train.plateau_patience", train.plateau.patience_epochs));
  if (cfg.has("data.classes")) {
    data.classes.clear();
    for (const auto& name : cfg.get_list("data.classes", {})) {
      data.classes.push_back(data::class_from_name(name).index);
    }
  }
  const auto cap = [&cfg](const char* key, std::size_t current) {
    return non_negative(cfg.get_int(key, static_cast<long long>(current)), key);
  };
  data.max_train_per_class = cap("data.max_train_per_class", data.max_train_per_class);
  data.max_val_per_class = cap("data.max_val_per_class", data.max_val_per_class);
  data.max_test_per_class = cap("data.max_test_per_class", data.max_test_per_class);
  adapt_lr = cfg.get_double("adapt.lr", adapt_lr);
  if (cfg.has("experiment.seeds")) {
    sweep_seeds.clear();
    for (int s : cfg.get_int_list("experiment.seeds", {})) {
      sweep_seeds.push_back(static_cast<std::uint64_t>(non_negative(s, "experiment.seeds")));
    }
  }
  fig6_snrs = cfg.get_int_list("experiment.fig6_snrs", fig6_snrs);
  fig6_shots = cfg.get_int_list("experiment.fig6_shots", fig6_shots);

  arch.validate();
  train.validate();
  if (!(adapt_lr >= 0.0)) fail(ErrorCode::kConfigInvalid, "adapt.lr must be >= 0");
}

KvConfig Profile::to_config() const {
  KvConfig c;
  std::vector<int> channels;
  for (const auto& b : arch.blocks) channels.push_back(b.out_channels);
  c.set("arch.channels", join_ints(channels));
  c.set("arch.kernel", std::to_string(arch.blocks.at(0).kernel_h));
  c.set("train.lr0", num(train.adam.lr0));
  c.set("train.beta1", num(train.adam.beta1));
  c.set("train.beta2", num(train.adam.beta2));
  c.set("train.eps", num(train.adam.eps));
  c.set("train.batch_size", std::to_string(train.batch_size));
  c.set("train.max_epochs", std::to_string(train.max_epochs));
  c.set("train.plateau_factor", num(train.plateau.factor));
  c.set("train.plateau_patience", std::to_string(train.plateau.patience_epochs));
  std::vector<std::string> classes;
  for (int k : data.active_classes()) classes.emplace_back(data::class_from_index(k).name());
  c.set("data.classes", join(classes));
  c.set("data.max_train_per_class", std::to_string(data.max_train_per_class));
  c.set("data.max_val_per_class", std::to_string(data.max_val_per_class));
  c.set("data.max_test_per_class", std::to_string(data.max_test_per_class));
  c.set("adapt.lr", num(adapt_lr));
  c.set("experiment.seeds", join_ints(sweep_seeds));
  c.set("experiment.fig6_snrs", join_ints(fig6_snrs));
  c.set("experiment.fig6_shots", join_ints(fig6_shots));
  return c;
}

Profile make_profile(std::string_view name) {
  if (name == "paper") return Profile::paper();
  if (name == "desk") return Profile::desk();
  fail(ErrorCode::kUsage, "unknown profile '" + std::string(name) + "' (paper|desk)");
}

}  // namespace nkws::bench
