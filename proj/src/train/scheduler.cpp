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

#include "train/scheduler.hpp"

#include "common/error.hpp"

namespace nkws::train {

void PlateauConfig::validate() const {
  if (!(factor > 0.0 && factor < 1.0)) {
    fail(ErrorCode::kConfigInvalid, "plateau factor must be in (0, 1)");
  }
  if (patience_epochs < 1) fail(ErrorCode::kConfigInvalid, "plateau patience must be >= 1");
}

PlateauScheduler::PlateauScheduler(PlateauConfig cfg) : cfg_(cfg) { cfg_.validate(); }

bool PlateauScheduler::observe(double value) {
  if (value > best_) {
    best_ = value;
    age_ = 0;
    return false;
  }
  if (++age_ >= cfg_.patience_epochs) {
    age_ = 0;
    return true;
  }
  return false;
}

double plateau_scheduler(std::span<const double> history, double current_lr,
                         const PlateauConfig& cfg) {
  if (history.empty()) fail(ErrorCode::kInvalidArgument, "scheduler history is empty");
  PlateauScheduler replay(cfg);
  bool reduce = false;
  for (double v : history) reduce = replay.observe(v);
  return reduce ? current_lr * cfg.factor : current_lr;
}

}  // namespace nkws::train
