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

#include "optosqueeze/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "optosqueeze/errors.hpp"

namespace optosqueeze {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// '#' starts a comment at the beginning of a line or after whitespace, outside
// double quotes.
std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (!quoted && line[i] == '#' &&
        (i == 0 || std::isspace(static_cast<unsigned char>(line[i - 1])))) {
      return line.substr(0, i);
    }
  }
  return line;
}

bool valid_key(std::string_view key) {
  if (key.empty() || key.front() == '.' || key.back() == '.') return false;
  return std::all_of(key.begin(), key.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

std::string unquote(std::string_view v) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return std::string(v.substr(1, v.size() - 2));
  return std::string(v);
}

double parse_plain(std::string_view text, bool* ok) {
  text = trim(text);
  *ok = true;
  if (text.empty()) {
    *ok = false;
    return 0.0;
  }
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "inf" || lower == "+inf" || lower == "infinity") {
    return std::numeric_limits<double>::infinity();
  }
  if (lower == "-inf") return -std::numeric_limits<double>::infinity();
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  if (*begin == '+') ++begin;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) *ok = false;
  return value;
}

}  // namespace

double parse_real(std::string_view text) {
  const std::string_view t = trim(text);
  bool ok = false;
  double value = parse_plain(t, &ok);
  if (ok) return value;
  // [coefficient][*]pi[/denominator]
  const std::size_t pi = t.find("pi");
  if (pi != std::string_view::npos) {
    std::string_view coef = trim(t.substr(0, pi));
    if (!coef.empty() && coef.back() == '*') coef = trim(coef.substr(0, coef.size() - 1));
    double c = 1.0;
    if (coef == "-") {
      c = -1.0;
    } else if (!coef.empty() && coef != "+") {
      c = parse_plain(coef, &ok);
      if (!ok) throw ValidationError("not a number: '" + std::string(text) + "'");
    }
    std::string_view rest = trim(t.substr(pi + 2));
    double d = 1.0;
    if (!rest.empty()) {
      if (rest.front() != '/') throw ValidationError("not a number: '" + std::string(text) + "'");
      d = parse_plain(rest.substr(1), &ok);
      if (!ok || d == 0.0) throw ValidationError("not a number: '" + std::string(text) + "'");
    }
    return c * std::numbers::pi / d;
  }
  throw ValidationError("not a number: '" + std::string(text) + "'");
}

std::vector<double> parse_range(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ':') {
      parts.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  if (parts.size() != 3) {
    throw ValidationError("range must be start:stop:count, got '" + std::string(text) + "'");
  }
  const double a = parse_real(parts[0]);
  const double b = parse_real(parts[1]);
  const double c = parse_real(parts[2]);
  if (!(c >= 1.0) || c != std::floor(c) || c > 1e7) {
    throw ValidationError("range count must be a positive integer in '" + std::string(text) + "'");
  }
  const auto n = static_cast<std::size_t>(c);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  if (n > 1) out.back() = b;
  return out;
}

std::vector<double> parse_list(std::string_view text) {
  if (text.find(':') != std::string_view::npos) return parse_range(trim(text));
  std::vector<double> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ',') {
      const std::string_view item = trim(text.substr(start, i - start));
      if (item.empty()) throw ValidationError("empty list element in '" + std::string(text) + "'");
      out.push_back(parse_real(item));
      start = i + 1;
    }
  }
  return out;
}

std::string format_real(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

Config Config::parse(std::string_view text, std::string_view source) {
  Config config;
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    const std::string where = std::string(source) + ":" + std::to_string(line_no);
    line = trim(strip_comment(line));
    if (line.empty()) {
      if (nl == text.size()) break;
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') throw ValidationError(where + ": unterminated section header");
      const std::string_view name = trim(line.substr(1, line.size() - 2));
      if (!name.empty() && !valid_key(name)) {
        throw ValidationError(where + ": invalid section name '" + std::string(name) + "'");
      }
      section = std::string(name);
    } else {
      const std::size_t eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw ValidationError(where + ": expected 'key = value'");
      }
      const std::string_view key = trim(line.substr(0, eq));
      if (!valid_key(key)) throw ValidationError(where + ": invalid key '" + std::string(key) + "'");
      const std::string full = section.empty() ? std::string(key) : section + "." + std::string(key);
      if (config.has(full)) throw ValidationError(where + ": duplicate key '" + full + "'");
      config.entries_[full] = unquote(trim(line.substr(eq + 1)));
    }
    if (nl == text.size()) break;
  }
  return config;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.string());
}

Config Config::from_result_csv(std::string_view text) {
  constexpr std::string_view kPrefix = "# config ";
  std::string collected;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t nl = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (line.rfind(kPrefix, 0) == 0) {
      collected += line.substr(kPrefix.size());
      collected += '\n';
    } else if (line.empty() || line.front() != '#') {
      break;
    }
  }
  return parse(collected, "<result file>");
}

void Config::set(const std::string& key, const std::string& value) {
  if (!valid_key(key)) throw ValidationError("invalid key '" + key + "'");
  entries_[key] = value;
}

void Config::apply_override(std::string_view assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ValidationError("override must be key=value, got '" + std::string(assignment) + "'");
  }
  set(std::string(trim(assignment.substr(0, eq))), unquote(trim(assignment.substr(eq + 1))));
}

std::string Config::get_string(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ValidationError("missing required config key '" + key + "'");
  return it->second;
}

double Config::get_double(const std::string& key) const {
  const std::string v = get_string(key);
  try {
    return parse_real(v);
  } catch (const ValidationError&) {
    throw ValidationError("config key '" + key + "': expected a number, got '" + v + "'");
  }
}

long Config::get_int(const std::string& key) const {
  const double v = get_double(key);
  if (v != std::floor(v) || std::abs(v) > 1e15) {
    throw ValidationError("config key '" + key + "': expected an integer");
  }
  return static_cast<long>(v);
}

bool Config::get_bool(const std::string& key) const {
  std::string v = get_string(key);
  std::transform(v.begin(), v.end(), v.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ValidationError("config key '" + key + "': expected a boolean, got '" + v + "'");
}

std::vector<double> Config::get_list(const std::string& key) const {
  const std::string v = get_string(key);
  try {
    return parse_list(v);
  } catch (const ValidationError& e) {
    throw ValidationError("config key '" + key + "': " + e.what());
  }
}

}  // namespace optosqueeze
