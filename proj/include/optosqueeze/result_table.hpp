// Copyright 2026 The optosqueeze Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OPTOSQUEEZE_RESULT_TABLE_HPP
#define OPTOSQUEEZE_RESULT_TABLE_HPP

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace optosqueeze {

inline constexpr const char* kVersion = "0.1.0";

/// Rectangular table of reals with ordered metadata and an echoed config.
///
/// CSV layout:
///   # version = 0.1.0
///   # timestamp = 2026-01-01T00:00:00Z
///   # config experiment = fidelity-sweep
///   mu,infidelity_ideal
///   0.5,0.01
class ResultTable {
 public:
  using Entries = std::vector<std::pair<std::string, std::string>>;

  ResultTable() = default;
  explicit ResultTable(std::vector<std::string> columns);

  void add_row(std::vector<double> row);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<double>>& rows() const { return rows_; }
  std::size_t column_index(const std::string& name) const;
  std::vector<double> column(const std::string& name) const;

  /// Metadata other than the config echo (version, timestamp, ...).
  const Entries& metadata() const { return metadata_; }
  void set_metadata(const std::string& key, const std::string& value);
  const Entries& config() const { return config_; }
  void set_config(Entries config) { config_ = std::move(config); }

  void write_csv(std::ostream& out) const;
  void write_json(std::ostream& out) const;
  static ResultTable read_csv(std::istream& in);
  static ResultTable read_json(std::istream& in);

  bool operator==(const ResultTable&) const = default;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> rows_;
  Entries metadata_;
  Entries config_;
};

/// UTC ISO-8601 time, taken from SOURCE_DATE_EPOCH when set.
std::string build_timestamp();

}  // namespace optosqueeze

#endif  // OPTOSQUEEZE_RESULT_TABLE_HPP
