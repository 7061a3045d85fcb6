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

#ifndef NOISEKWS_TRAIN_SCHEDULER_HPP_
#define NOISEKWS_TRAIN_SCHEDULER_HPP_

#include <limits>
#include <span>

namespace nkws::train {

struct PlateauConfig {
  double factor = 0.1;
  int patience_epochs = 10;

  void validate() const;
};

// Multiplies the learning rate by factor once the best monitored value is
// patience epochs old. Only a strict increase counts as improvement, and the
// age restarts after each reduction.
class PlateauScheduler {
 public:
  explicit PlateauScheduler(PlateauConfig cfg = {});

  // Feeds one epoch's value; returns true when the rate should drop now.
  bool observe(double value);

  double best() const { return best_; }
  int epochs_since_best() const { return age_; }

 private:
  PlateauConfig cfg_;
  double best_ = -std::numeric_limits<double>::infinity();
  int age_ = 0;
};

// Replays history (oldest first) and returns the rate to use after its last
// entry, given the rate in force before that entry.
double plateau_scheduler(std::span<const double> history, double current_lr,
                         const PlateauConfig& cfg = {});

}  // namespace nkws::train

#endif  // NOISEKWS_TRAIN_SCHEDULER_HPP_
