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

#ifndef NOISEKWS_BENCH_FIGURE_TABLE_HPP_
#define NOISEKWS_BENCH_FIGURE_TABLE_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "common/csv.hpp"

namespace nkws::bench {

inline constexpr const char* kFigureTableHeader =
    "figure_id,model_id,noise_source,train_snr_db,test_snr_db,shots,epochs,seed,accuracy";

// One accuracy in long format. fig3/fig4 rows leave train SNR, shots and
// epochs empty; fig5/fig6 rows fill them.
struct FigureRow {
  std::string figure_id;
  std::string model_id;
  std::string noise_source;
  std::optional<int> train_snr_db;
  int test_snr_db = 0;
  std::optional<int> shots;
  std::optional<int> epochs;
  std::uint64_t seed = 0;
  double accuracy = 0.0;

  bool operator==(const FigureRow&) const = default;
};

bool is_figure_id(const std::string& id);

// Throws ConfigInvalid when a row breaks its figure's column rules.
void validate_row(const FigureRow& row);

CsvTable figure_table_csv(std::span<const FigureRow> rows);

// Parses and validates; throws CorruptHeader on a schema mismatch.
std::vector<FigureRow> parse_figure_table(const CsvTable& table);

}  // namespace nkws::bench

#endif  // NOISEKWS_BENCH_FIGURE_TABLE_HPP_
