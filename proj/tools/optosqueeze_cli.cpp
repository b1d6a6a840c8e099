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

// optosqueeze <subcommand> [--config FILE] [--set key=value]... [flags]
//
// Exit codes: 0 success, 1 invalid input or unwritable output, 2 numerical failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "optosqueeze/config.hpp"
#include "optosqueeze/errors.hpp"
#include "optosqueeze/experiments.hpp"

namespace fs = std::filesystem;
using namespace optosqueeze;

namespace {

struct Options {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string mu;
  std::string phi;
  std::string mu_log_range;
  std::string output;
  std::string output_dir;
  std::string format;
  bool to_stdout = false;
  bool quiet = false;
};

bool is_sweep(const std::string& experiment) {
  return experiment == "fidelity-sweep" || experiment == "impulse" || experiment == "cat-decay";
}

Config build_config(const std::string& experiment, const Options& o) {
  Config config;
  if (!o.config_path.empty()) {
    if (fs::path(o.config_path).extension() == ".csv") {
      // A previous result file: reuse its echoed config.
      std::ifstream in(o.config_path);
      if (!in) throw ValidationError("cannot open config file '" + o.config_path + "'");
      const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      config = Config::from_result_csv(text);
    } else {
      config = Config::load(o.config_path);
    }
    if (!config.has("experiment")) {
      throw ValidationError("missing required config key 'experiment' in " + o.config_path);
    }
  }
  if (!o.mu.empty()) config.set(is_sweep(experiment) ? "sweep.mu" : "squeeze.mu", o.mu);
  if (!o.phi.empty()) config.set("squeeze.phi", o.phi);
  if (!o.mu_log_range.empty()) config.set("sweep.mu_log_range", o.mu_log_range);
  if (!o.output.empty()) config.set("output.path", o.output);
  if (!o.output_dir.empty()) config.set("output.dir", o.output_dir);
  if (!o.format.empty()) config.set("output.format", o.format);
  for (const auto& s : o.overrides) config.apply_override(s);
  return resolve_config(config, experiment);
}

std::ofstream open_output(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, mode);
  if (!out) throw ValidationError("cannot write output file '" + path.string() + "'");
  return out;
}

void write_table(const ResultTable& table, const fs::path& path, bool json) {
  std::ofstream out = open_output(path);
  json ? table.write_json(out) : table.write_csv(out);
  if (!out) throw ValidationError("failed writing '" + path.string() + "'");
}

int run(const std::string& experiment, const Options& o) {
  const Config config = build_config(experiment, o);
  const std::string format = config.get_string("output.format");
  if (format != "csv" && format != "json") {
    throw ValidationError("config key 'output.format' must be csv or json");
  }
  const std::string grid_format = config.get_string("output.grid_format");
  if (grid_format != "csv" && grid_format != "binary") {
    throw ValidationError("config key 'output.grid_format' must be csv or binary");
  }
  const bool json = format == "json";
  const ExperimentOutput result = run_experiment(config);

  if (o.to_stdout) {
    json ? result.table.write_json(std::cout) : result.table.write_csv(std::cout);
    std::cerr << result.summary << "\n";
    return 0;
  }

  fs::path main_path;
  if (config.has("output.path")) {
    main_path = config.get_string("output.path");
  } else {
    fs::path dir = ".";
    if (config.has("output.dir")) {
      dir = config.get_string("output.dir");
    } else if (const char* env = std::getenv("OPTOSQUEEZE_OUTPUT_DIR"); env != nullptr && *env) {
      dir = env;
    }
    const std::string name = config.has("output.name") ? config.get_string("output.name") : experiment;
    main_path = dir / (name + (json ? ".json" : ".csv"));
  }
  const fs::path stem = main_path.parent_path() / main_path.stem();
  write_table(result.table, main_path, json);
  std::vector<std::string> written = {main_path.string()};
  for (const auto& [name, table] : result.extra_tables) {
    const fs::path p = stem.string() + "_" + name + (json ? ".json" : ".csv");
    write_table(table, p, json);
    written.push_back(p.string());
  }
  if (config.get_bool("output.grids")) {
    for (const auto& g : result.grids) {
      const bool binary = grid_format == "binary";
      const fs::path p = stem.string() + "_grid_" + g.name + (binary ? ".bin" : ".csv");
      std::ofstream out = open_output(p, binary ? std::ios::out | std::ios::binary : std::ios::out);
      binary ? write_grid_binary(out, g.grid) : write_grid_csv(out, g.grid);
      if (!out) throw ValidationError("failed writing '" + p.string() + "'");
      written.push_back(p.string());
    }
  }
  std::cout << result.summary << "\n";
  if (!o.quiet) {
    for (const auto& w : written) std::cout << "wrote " << w << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pulsed optomechanical squeezing simulator"};
  app.require_subcommand(1);
  Options o;
  std::string chosen;
  for (const auto& name : experiment_names()) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config,-c", o.config_path, "config file");
    sub->add_option("--set,-s", o.overrides, "override a config key (key=value)");
    sub->add_option("--mu", o.mu, "squeeze factor (sweeps: list or range)");
    sub->add_option("--phi", o.phi, "mechanical rotation angle between pulses");
    sub->add_option("--mu-log-range", o.mu_log_range, "natural-log mu range start:stop:count");
    sub->add_option("--output,-o", o.output, "main output file");
    sub->add_option("--output-dir", o.output_dir, "output directory");
    sub->add_option("--format", o.format, "csv or json");
    sub->add_flag("--stdout", o.to_stdout, "print the main table instead of writing files");
    sub->add_flag("--quiet,-q", o.quiet, "only print the summary line");
    sub->callback([&chosen, name] { chosen = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  try {
    return run(chosen, o);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  }
}
