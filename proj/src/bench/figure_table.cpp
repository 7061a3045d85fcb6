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

#include "bench/figure_table.hpp"

#include "common/error.hpp"
#include "common/kv_config.hpp"

namespace nkws::bench {
namespace {

std::string opt(const std::optional<int>& v) { return v ? std::to_string(*v) : ""; }

std::optional<int> parse_opt(const std::string& s, const char* what) {
  if (s.empty()) return std::nullopt;
  return static_cast<int>(parse_int(s, what));
}

}  // namespace

bool is_figure_id(const std::string& id) {
  return id == "fig3" || id == "fig4" || id == "fig5" || id == "fig6";
}

void validate_row(const FigureRow& row) {
  if (!is_figure_id(row.figure_id)) {
    fail(ErrorCode::kConfigInvalid, "unknown figure id '" + row.figure_id + "'");
  }
  if (row.model_id.empty() || row.noise_source.empty()) {
    fail(ErrorCode::kConfigInvalid, "figure row needs model_id and noise_source");
  }
  if (!(row.accuracy >= 0.0 && row.accuracy <= 1.0)) {
    fail(ErrorCode::kConfigInvalid, "accuracy outside [0, 1]");
  }
  const bool adapted = row.figure_id == "fig5" || row.figure_id == "fig6";
  const int filled = row.train_snr_db.has_value() + row.shots.has_value() + row.epochs.has_value();
  if (filled != (adapted ? 3 : 0)) {
    fail(ErrorCode::kConfigInvalid,
         row.figure_id + " rows " + (adapted ? "need" : "must not have") +
             " train_snr_db, shots and epochs");
  }
}

CsvTable figure_table_csv(std::span<const FigureRow> rows) {
  CsvTable t;
  t.header = {"figure_id", "model_id", "noise_source", "train_snr_db", "test_snr_db",
              "shots",     "epochs",   "seed",         "accuracy"};
  for (const auto& r : rows) {
    validate_row(r);
    t.rows.push_back({r.figure_id, r.model_id, r.noise_source, opt(r.train_snr_db),
                      std::to_string(r.test_snr_db), opt(r.shots), opt(r.epochs),
                      std::to_string(r.seed), format_fixed6(r.accuracy)});
  }
  return t;
}

std::vector<FigureRow> parse_figure_table(const CsvTable& table) {
  if (format_csv({table.header, {}}) != std::string(kFigureTableHeader) + "\n") {
    fail(ErrorCode::kCorruptHeader, "figure table header does not match schema");
  }
  std::vector<FigureRow> rows;
  for (const auto& r : table.rows) {
    if (r.size() != table.header.size()) {
      fail(ErrorCode::kCorruptHeader, "figure table row has the wrong column count");
    }
    FigureRow row;
    row.figure_id = r[0];
    row.model_id = r[1];
    row.noise_source = r[2];
    row.train_snr_db = parse_opt(r[3], "train_snr_db");
    row.test_snr_db = static_cast<int>(parse_int(r[4], "test_snr_db"));
    row.shots = parse_opt(r[5], "shots");
    row.epochs = parse_opt(r[6], "epochs");
    row.seed = static_cast<std::uint64_t>(parse_int(r[7], "seed"));
    row.accuracy = parse_double(r[8], "accuracy");
    validate_row(row);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace nkws::bench
