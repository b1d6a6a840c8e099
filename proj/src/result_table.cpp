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

#include "optosqueeze/result_table.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <istream>
#include <ostream>

#include "json.hpp"
#include "optosqueeze/errors.hpp"

namespace optosqueeze {

namespace {

std::string format_cell(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_cell(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw ValidationError("result CSV: not a number: '" + s + "'");
  }
  return v;
}

std::string quote_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_record(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw ValidationError("result CSV: unterminated quoted field");
  fields.push_back(std::move(cur));
  return fields;
}

void check_entry(const std::string& key, const std::string& value) {
  if (key.find_first_of("\r\n=") != std::string::npos || value.find_first_of("\r\n") != std::string::npos) {
    throw ValidationError("metadata entries must be single-line and keys may not contain '='");
  }
}

}  // namespace

ResultTable::ResultTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) throw ValidationError("result table needs at least one column");
}

void ResultTable::add_row(std::vector<double> row) {
  if (row.size() != columns_.size()) {
    throw ValidationError("row has " + std::to_string(row.size()) + " values, table has " +
                          std::to_string(columns_.size()) + " columns");
  }
  rows_.push_back(std::move(row));
}

std::size_t ResultTable::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i] == name) return i;
  }
  throw ValidationError("no column named '" + name + "'");
}

std::vector<double> ResultTable::column(const std::string& name) const {
  const std::size_t c = column_index(name);
  std::vector<double> out;
  out.reserve(rows_.size());
  for (const auto& r : rows_) out.push_back(r[c]);
  return out;
}

void ResultTable::set_metadata(const std::string& key, const std::string& value) {
  check_entry(key, value);
  for (auto& [k, v] : metadata_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  metadata_.emplace_back(key, value);
}

void ResultTable::write_csv(std::ostream& out) const {
  for (const auto& [k, v] : metadata_) out << "# " << k << " = " << v << "\n";
  for (const auto& [k, v] : config_) {
    check_entry(k, v);
    out << "# config " << k << " = " << v << "\n";
  }
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    out << (i ? "," : "") << quote_field(columns_[i]);
  }
  out << "\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_cell(row[i]);
    out << "\n";
  }
}

ResultTable ResultTable::read_csv(std::istream& in) {
  ResultTable table;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!header && line.rfind("# ", 0) == 0) {
      const std::string body = line.substr(2);
      const std::size_t eq = body.find(" = ");
      if (eq == std::string::npos) continue;
      std::string key = body.substr(0, eq);
      std::string value = body.substr(eq + 3);
      if (key.rfind("config ", 0) == 0) {
        table.config_.emplace_back(key.substr(7), std::move(value));
      } else {
        table.metadata_.emplace_back(std::move(key), std::move(value));
      }
      continue;
    }
    if (!header) {
      table.columns_ = split_record(line);
      header = true;
      continue;
    }
    if (line.empty()) continue;
    std::vector<double> row;
    for (const auto& f : split_record(line)) row.push_back(parse_cell(f));
    table.add_row(std::move(row));
  }
  if (!header) throw ValidationError("result CSV: missing header row");
  return table;
}

void ResultTable::write_json(std::ostream& out) const {
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [k, v] : metadata_) meta[k] = v;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : config_) cfg[k] = v;
  meta["config"] = cfg;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : rows_) {
    nlohmann::ordered_json jr = nlohmann::ordered_json::array();
    for (double v : r) {
      if (std::isfinite(v)) {
        jr.push_back(v);
      } else {
        jr.push_back(format_cell(v));
      }
    }
    rows.push_back(std::move(jr));
  }
  nlohmann::ordered_json doc;
  doc["metadata"] = std::move(meta);
  doc["columns"] = columns_;
  doc["rows"] = std::move(rows);
  out << doc.dump(2) << "\n";
}

ResultTable ResultTable::read_json(std::istream& in) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("result JSON: ") + e.what());
  }
  ResultTable table(doc.at("columns").get<std::vector<std::string>>());
  for (const auto& [k, v] : doc.at("metadata").items()) {
    if (k == "config") {
      for (const auto& [ck, cv] : v.items()) table.config_.emplace_back(ck, cv.get<std::string>());
    } else {
      table.metadata_.emplace_back(k, v.get<std::string>());
    }
  }
  for (const auto& jr : doc.at("rows")) {
    std::vector<double> row;
    for (const auto& v : jr) row.push_back(v.is_string() ? parse_cell(v.get<std::string>()) : v.get<double>());
    table.add_row(std::move(row));
  }
  return table;
}

std::string build_timestamp() {
  std::time_t now = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch != nullptr && *epoch != '\0') {
    char* end = nullptr;
    const long long v = std::strtoll(epoch, &end, 10);
    if (*end == '\0' && v >= 0) now = static_cast<std::time_t>(v);
  }
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace optosqueeze
