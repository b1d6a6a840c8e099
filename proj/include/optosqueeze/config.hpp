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

// Flat key = value experiment configuration.
//
//   # comment
//   experiment = fidelity-sweep
//   squeeze.phi = 0.0628
//   [sweep]              # later keys are prefixed with "sweep."
//   q = 1e4, 1e5, 1e6    # list
//   mu_log_range = -1.2:1.2:49
//
// A result file's "# config key = value" lines are themselves a valid config.

#ifndef OPTOSQUEEZE_CONFIG_HPP
#define OPTOSQUEEZE_CONFIG_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace optosqueeze {

class Config {
 public:
  Config() = default;

  /// Parse config text. `source` names the origin in error messages.
  static Config parse(std::string_view text, std::string_view source = "<config>");
  static Config load(const std::filesystem::path& path);
  /// Collect the "# config key = value" lines of a result CSV.
  static Config from_result_csv(std::string_view text);

  void set(const std::string& key, const std::string& value);
  /// "key=value" as given to --set.
  void apply_override(std::string_view assignment);
  void erase(const std::string& key) { entries_.erase(key); }

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  const std::map<std::string, std::string>& entries() const { return entries_; }

  /// Typed access. Missing keys throw ValidationError naming the key;
  /// malformed values throw ValidationError naming key and value.
  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  long get_int(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  /// Comma-separated list or start:stop:count range.
  std::vector<double> get_list(const std::string& key) const;

 private:
  std::map<std::string, std::string> entries_;
};

/// Parse a real number, accepting "inf" and "pi"-multiples such as "2pi/100".
double parse_real(std::string_view text);

/// "start:stop:count", inclusive of both ends (count >= 1).
std::vector<double> parse_range(std::string_view text);

/// Comma-separated reals, or a range when the text contains ':'.
std::vector<double> parse_list(std::string_view text);

/// Shortest text that parses back to exactly the same double.
std::string format_real(double value);

}  // namespace optosqueeze

#endif  // OPTOSQUEEZE_CONFIG_HPP
