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

// Experiment runners. Each takes a Config, fills in defaults for the keys it
// knows, rejects keys it does not, and returns tables (and grids) whose
// metadata echo the resolved config.

#ifndef OPTOSQUEEZE_EXPERIMENTS_HPP
#define OPTOSQUEEZE_EXPERIMENTS_HPP

#include <string>
#include <utility>
#include <vector>

#include "optosqueeze/config.hpp"
#include "optosqueeze/result_table.hpp"
#include "optosqueeze/squeezer.hpp"
#include "optosqueeze/wigner.hpp"

namespace optosqueeze {

struct KeySpec {
  std::string key;
  /// Empty with required = false means "optional, no default".
  std::string default_value;
  bool required = false;
  std::string help;
};

const std::vector<std::string>& experiment_names();
/// Keys accepted by an experiment (including the shared run/output keys).
std::vector<KeySpec> experiment_keys(const std::string& experiment);

/// Validate against the experiment's keys, fill defaults, check required keys.
/// Throws ValidationError naming the offending key.
Config resolve_config(const Config& raw, const std::string& experiment);

struct NamedGrid {
  std::string name;
  WignerGrid grid;
};

struct ExperimentOutput {
  ResultTable table;
  /// Secondary tables, written next to the main one with the name as suffix.
  std::vector<std::pair<std::string, ResultTable>> extra_tables;
  std::vector<NamedGrid> grids;
  std::string summary;
};

ExperimentOutput run_squeeze(const Config& config);
ExperimentOutput run_fidelity_sweep(const Config& config);
ExperimentOutput run_fock_squeeze(const Config& config);
ExperimentOutput run_impulse(const Config& config);
ExperimentOutput run_cat_decay(const Config& config);
ExperimentOutput run_multimode(const Config& config);
ExperimentOutput run_photon_budget(const Config& config);
ExperimentOutput run_regime_check(const Config& config);

/// Dispatch on the config's "experiment" key.
ExperimentOutput run_experiment(const Config& config);

// ---------------------------------------------------------------------------
// Building blocks

/// High-Q estimate of the minimum detectable momentum kick after squeezing,
/// a damped quarter period and a readout of strength chi_ro.
double d_min_approx(double mu, double nbar_in, double chi_ro, double vsq, double phi,
                    double gamma, double omega_m, double nbar_m);

/// Minimum detectable kick (at the given SNR) from full Gaussian propagation:
/// thermal input, lossy squeezer, kick D on P, damped quarter period in the
/// same bath, readout P_L' = P_L + chi_ro X_M with a coherent pulse.
double d_min_full(double mu, double nbar_in, double chi_ro, double vsq, double phi,
                  const LossConfig& loss, double snr = 1.0);

/// Mode-1 infidelity of the squeezer when a second mechanical mode with
/// coupling ratio g2/g1 and frequency ratio omega2/omega1 shares the pulses.
double multimode_infidelity(double g_ratio, double mu, double phi, double omega_ratio,
                            double ancilla_vsq);

/// Beamsplitter reflectivity of a fibre delay line: 1 - 10^(-dB / 10).
double estimate_fiber_epsilon(double length_km, double db_per_km);

/// Squeezing in dB of the momentum variance, 20 log10(1 / mu).
double squeezing_db(double mu);

}  // namespace optosqueeze

#endif  // OPTOSQUEEZE_EXPERIMENTS_HPP
