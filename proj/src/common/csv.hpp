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

#ifndef NOISEKWS_COMMON_CSV_HPP_
#define NOISEKWS_COMMON_CSV_HPP_

#include <filesystem>
#include <string>
#include <vector>

namespace nkws {

using CsvRow = std::vector<std::string>;

struct CsvTable {
  CsvRow header;
  std::vector<CsvRow> rows;

  // Column position by name; throws ConfigInvalid when absent.
  std::size_t column(const std::string& name) const;
};

// RFC 4180 style: comma separated, LF line endings, fields quoted only when
// they contain a comma, quote or newline.
std::string format_csv(const CsvTable& table);
CsvTable parse_csv(const std::string& text);

void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

// Accuracy and other ratios are written with six fractional digits.
std::string format_fixed6(double value);

}  // namespace nkws

#endif  // NOISEKWS_COMMON_CSV_HPP_
