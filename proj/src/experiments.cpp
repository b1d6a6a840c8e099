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

#include "optosqueeze/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include "optosqueeze/errors.hpp"

namespace optosqueeze {

namespace {

constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------------------
// Key schemas

std::vector<KeySpec> shared_keys() {
  return {
      {"experiment", "", true, "experiment name"},
      {"run.parallel", "true", false, "evaluate sweep points concurrently"},
      {"output.dir", "", false, "output directory (default $OPTOSQUEEZE_OUTPUT_DIR or .)"},
      {"output.path", "", false, "main table path (overrides output.dir / output.name)"},
      {"output.name", "", false, "base file name (default: experiment name)"},
      {"output.format", "csv", false, "csv or json"},
      {"output.grids", "true", false, "write Wigner grids"},
      {"output.grid_format", "csv", false, "csv or binary"},
  };
}

std::vector<KeySpec> physical_keys(const char* q, const char* nbar_m, const char* eps) {
  return {
      {"physical.q", q, false, "mechanical quality factor omega_m / gamma"},
      {"physical.nbar_m", nbar_m, false, "mechanical bath occupancy"},
      {"physical.epsilon", eps, false, "delay-line loss"},
      {"physical.nbar_l", "0", false, "optical bath occupancy"},
      {"physical.omega_m", "1", false, "mechanical angular frequency"},
  };
}

const std::map<std::string, std::vector<KeySpec>>& schemas() {
  static const std::map<std::string, std::vector<KeySpec>> table = [] {
    std::map<std::string, std::vector<KeySpec>> m;
    auto with = [](std::vector<KeySpec> a, const std::vector<KeySpec>& b) {
      a.insert(a.end(), b.begin(), b.end());
      return a;
    };
    m["squeeze"] = with(
        {
            {"squeeze.mu", "", true, "target squeeze factor"},
            {"squeeze.phi", "2pi/100", false, "mechanical rotation between pulses"},
            {"ancilla.vsq", "0.5", false, "ancilla squeezed variance"},
            {"input.nbar", "0", false, "thermal occupancy of the mechanical input"},
            {"squeeze.optimize", "false", false, "numerically re-optimize the schedule"},
            {"squeeze.optimize_mode", "strengths", false, "strengths or full"},
        },
        physical_keys("inf", "0", "0"));
    m["fidelity-sweep"] = {
        {"sweep.mu_log_range", "-1.2:1.2:49", false, "natural-log mu range start:stop:count"},
        {"sweep.mu", "", false, "explicit mu list (overrides the range)"},
        {"squeeze.phi", "2pi/100", false, "mechanical rotation between pulses"},
        {"ancilla.vsq", "0.5", false, "ancilla squeezed variance"},
        {"sweep.log10_q", "4:7:7", false, "log10 Q values for the damping curves"},
        {"sweep.log10_epsilon", "-5:-2:7", false, "log10 epsilon values for the loss curves"},
        {"physical.nbar_m", "40000", false, "mechanical bath occupancy"},
        {"physical.nbar_l", "0", false, "optical bath occupancy"},
        {"physical.omega_m", "1", false, "mechanical angular frequency"},
        {"sweep.optimize", "false", false, "numerically re-optimize each lossy point"},
    };
    m["fock-squeeze"] = with(
        {
            {"squeeze.mu", "2", false, "squeeze factor"},
            {"squeeze.phi", "2pi/100", false, "mechanical rotation between pulses"},
            {"ancilla.vsq", "0.5", false, "ancilla squeezed variance"},
            {"sweep.epsilon", "0.01, 0.05", false, "delay-line loss values"},
            {"fock.n", "1", false, "Fock number of the input"},
            {"grid.half_extent", "16", false, "grid half width L"},
            {"grid.resolution", "512", false, "grid points per axis"},
        },
        {
            {"physical.q", "1e5", false, "mechanical quality factor"},
            {"physical.nbar_m", "40000", false, "mechanical bath occupancy"},
            {"physical.nbar_l", "0", false, "optical bath occupancy"},
            {"physical.omega_m", "1", false, "mechanical angular frequency"},
        });
    m["impulse"] = with(
        {
            {"sweep.mu_log_range", "-1.6:0:33", false, "natural-log mu range"},
            {"sweep.mu", "", false, "explicit mu list (overrides the range)"},
            {"impulse.nbar_in", "1, 3", false, "initial thermal occupancies"},
            {"impulse.snr", "1", false, "detection threshold signal-to-noise ratio"},
            {"readout.chi", "3", false, "readout pulse strength"},
            {"ancilla.vsq", "0.5", false, "ancilla squeezed variance"},
            {"squeeze.phi", "2pi/100", false, "mechanical rotation between pulses"},
        },
        physical_keys("1e5", "40000", "0.05"));
    m["cat-decay"] = with(
        {
            {"cat.alpha", "1, 2", false, "odd cat amplitudes"},
            {"cat.momentum_mu", "0.5", false, "momentum pre-squeeze scenario"},
            {"cat.samples_per_period", "64", false, "eta samples per mechanical period"},
            {"cat.max_periods", "40", false, "half-life search horizon"},
            {"cat.trace_periods", "4", false, "length of the eta(t) traces"},
            {"sweep.mu_log_range", "-0.7:1.0:35", false, "natural-log mu range for tau(mu)"},
            {"sweep.mu", "", false, "explicit mu list (overrides the range)"},
            {"squeeze.phi", "pi/50", false, "pre-squeeze mechanical rotation"},
            {"ancilla.vsq", "0.5", false, "ancilla squeezed variance"},
            {"grid.half_extent", "8", false, "grid half width L"},
            {"grid.resolution", "512", false, "grid points per axis"},
        },
        physical_keys("1e7", "40000", "1e-3"));
    m["multimode"] = {
        {"multimode.g_ratio", "0, 1, 0.5, 0.2, 0.1", false, "g2 / g1 values"},
        {"multimode.omega_ratio", "2", false, "omega2 / omega1"},
        {"squeeze.mu", "1.4142135623730951", false, "target squeeze factor on mode 1"},
        {"squeeze.phi", "pi/50", false, "mechanical rotation of mode 1"},
        {"ancilla.vsq", "1", false, "ancilla squeezed variance"},
    };
    m["photon-budget"] = {
        {"squeeze.mu", "1.4142135623730951", false, "squeeze factor(s)"},
        {"squeeze.phi", "2pi/100", false, "mechanical rotation between pulses"},
    };
    m["regime-check"] = {
        {"regime.g0", "1", false, "single-photon coupling rate"},
        {"regime.omega_m", "1e6", false, "mechanical angular frequency"},
        {"regime.kappa", "1e9", false, "cavity linewidth"},
        {"regime.pulse_bandwidth", "1e8", false, "pulse bandwidth"},
        {"regime.margin", "10", false, "required ratio for each inequality"},
    };
    for (auto& [name, keys] : m) {
      const auto shared = shared_keys();
      keys.insert(keys.begin(), shared.begin(), shared.end());
    }
    return m;
  }();
  return table;
}

// Keys that do not affect the computed numbers and are left out of the echo.
bool echoed(const std::string& key) { return key.rfind("output.", 0) != 0; }

// ---------------------------------------------------------------------------
// Helpers

template <typename F>
auto parallel_map(std::size_t n, bool parallel, F f) -> std::vector<decltype(f(std::size_t{}))> {
  using R = decltype(f(std::size_t{}));
  std::vector<R> out;
  out.reserve(n);
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (!parallel || hw == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) out.push_back(f(i));
    return out;
  }
  std::vector<std::future<R>> pending;
  for (std::size_t i = 0; i < n; ++i) pending.push_back(std::async(std::launch::async, f, i));
  for (auto& p : pending) out.push_back(p.get());
  return out;
}

ResultTable make_table(std::vector<std::string> columns, const Config& resolved) {
  ResultTable t(std::move(columns));
  t.set_metadata("version", kVersion);
  t.set_metadata("timestamp", build_timestamp());
  t.set_metadata("experiment", resolved.get_string("experiment"));
  ResultTable::Entries echo;
  for (const auto& [k, v] : resolved.entries()) {
    if (echoed(k)) echo.emplace_back(k, v);
  }
  t.set_config(std::move(echo));
  return t;
}

std::vector<double> mu_values(const Config& c) {
  if (c.has("sweep.mu")) return c.get_list("sweep.mu");
  std::vector<double> out;
  for (double l : c.get_list("sweep.mu_log_range")) out.push_back(std::exp(l));
  return out;
}

LossConfig loss_from(const Config& c, double epsilon_override = -1.0) {
  const double q = c.get_double("physical.q");
  const double eps = epsilon_override >= 0.0 ? epsilon_override : c.get_double("physical.epsilon");
  return LossConfig::from_quality(q, c.get_double("physical.nbar_m"), eps,
                                  c.get_double("physical.nbar_l"), c.get_double("physical.omega_m"));
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

double lossy_infidelity(double mu, double phi, double vsq, const LossConfig& loss, bool optimize,
                        const GaussianState& input) {
  if (optimize && mu != 1.0) {
    OptimizeOptions opts;
    opts.input = input;
    const OptimizationResult r = optimize_schedule(mu, phi, loss, vsq, opts);
    return r.objective;
  }
  const PulseSchedule s = schedule_for_mu(mu, phi, vsq);
  return squeezer_infidelity(build_lossy(s, loss), ancilla_state(s), input, mu, phi);
}

GridSpec grid_from(const Config& c) {
  GridSpec g;
  g.half_extent = c.get_double("grid.half_extent");
  const long n = c.get_int("grid.resolution");
  if (n <= 0) throw ValidationError("config key 'grid.resolution' must be positive");
  g.resolution = static_cast<std::size_t>(n);
  try {
    g.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("config key 'grid.*': ") + e.what());
  }
  return g;
}

}  // namespace

// ---------------------------------------------------------------------------
// Config resolution

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"squeeze",   "fidelity-sweep", "fock-squeeze",
                                                 "impulse",   "cat-decay",      "multimode",
                                                 "photon-budget", "regime-check"};
  return names;
}

std::vector<KeySpec> experiment_keys(const std::string& experiment) {
  const auto it = schemas().find(experiment);
  if (it == schemas().end()) throw ValidationError("unknown experiment '" + experiment + "'");
  return it->second;
}

Config resolve_config(const Config& raw, const std::string& experiment) {
  const std::vector<KeySpec> keys = experiment_keys(experiment);
  if (raw.has("experiment") && raw.get_string("experiment") != experiment) {
    throw ValidationError("config key 'experiment' is '" + raw.get_string("experiment") +
                          "' but '" + experiment + "' was requested");
  }
  std::set<std::string> known;
  for (const auto& k : keys) known.insert(k.key);
  for (const auto& [k, v] : raw.entries()) {
    if (known.count(k) == 0) {
      throw ValidationError("unknown config key '" + k + "' for experiment '" + experiment + "'");
    }
  }
  Config out = raw;
  out.set("experiment", experiment);
  for (const auto& k : keys) {
    if (out.has(k.key)) continue;
    if (k.required) throw ValidationError("missing required config key '" + k.key + "'");
    if (!k.default_value.empty()) out.set(k.key, k.default_value);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Building blocks

double squeezing_db(double mu) {
  if (!(mu > 0.0)) throw ValidationError("mu must be positive");
  return 20.0 * std::log10(1.0 / mu);
}

double estimate_fiber_epsilon(double length_km, double db_per_km) {
  if (!(length_km >= 0.0) || !(db_per_km >= 0.0) || !std::isfinite(length_km * db_per_km)) {
    throw ValidationError("fibre length and attenuation must be nonnegative and finite");
  }
  return -std::expm1(-length_km * db_per_km / 10.0 * std::log(10.0));
}

double d_min_approx(double mu, double nbar_in, double chi_ro, double vsq, double phi,
                    double gamma, double omega_m, double nbar_m) {
  if (!(mu > 0.0)) throw ValidationError("mu must be positive");
  if (!(chi_ro > 0.0)) throw ValidationError("readout strength must be positive");
  if (!(nbar_in >= 0.0) || !(nbar_m >= 0.0) || !(vsq > 0.0) || !(gamma >= 0.0) ||
      !(omega_m > 0.0)) {
    throw ValidationError("invalid impulse parameters");
  }
  const double n_in = 2.0 * nbar_in + 1.0;
  const double n_m = 2.0 * nbar_m + 1.0;
  const double t = std::tan(phi);
  const double shot = 1.0 / (chi_ro * chi_ro);
  const double base = mu * mu * n_in + shot + (1.0 - mu) / mu * vsq * t;
  if (!(base > 0.0)) throw NumericalError("d_min_approx: noise variance is not positive");
  const double damping =
      kPi * shot + (kPi - 2.0) * n_m + 4.0 * (1.0 - mu) * (n_in * mu - vsq / mu) * t;
  return std::sqrt(base) * (1.0 + gamma / (8.0 * omega_m) * damping / base);
}

double d_min_full(double mu, double nbar_in, double chi_ro, double vsq, double phi,
                  const LossConfig& loss, double snr) {
  if (!(chi_ro > 0.0)) throw ValidationError("readout strength must be positive");
  if (!(snr > 0.0)) throw ValidationError("snr must be positive");
  loss.validate();
  const PulseSchedule s = schedule_for_mu(mu, phi, vsq);
  const GaussianChannel sq = mechanical_reduced_channel(build_lossy(s, loss), ancilla_state(s));
  const GaussianState input = GaussianState::thermal(ModeLayout::mech(), nbar_in);
  const Eigen::Matrix2d m = sq.map().matrix();
  const Eigen::Matrix2d v1 = m * input.cov() * m.transpose() + sq.noise().covariance();
  // Quarter period of damped motion turns the kick on P into a shift of X.
  const double t = (kPi / 2.0) / (sigma_factor(loss.gamma, loss.omega_m) * loss.omega_m);
  const Eigen::Matrix2d r = lossy_rotation_block(loss.gamma, loss.omega_m, t);
  const Eigen::Matrix2d v2 =
      r * v1 * r.transpose() + thermal_noise_block(loss.gamma, loss.omega_m, loss.nbar_m, t);
  const double gain = std::abs(r(0, 1));
  if (!(gain > 0.0)) throw NumericalError("kick does not reach the read quadrature");
  return snr * std::sqrt(v2(0, 0) + 1.0 / (chi_ro * chi_ro)) / gain;
}

double multimode_infidelity(double g_ratio, double mu, double phi, double omega_ratio,
                            double ancilla_vsq) {
  if (!(g_ratio >= 0.0) || !std::isfinite(g_ratio)) {
    throw ValidationError("coupling ratio must be nonnegative");
  }
  if (!(omega_ratio > 0.0)) throw ValidationError("frequency ratio must be positive");
  const ModeLayout layout({"mech1", "mech2", std::string(kOptMode)});
  const std::vector<ModeCoupling> couplings = {{"mech1", 1.0}, {"mech2", g_ratio}};
  // Each pulse's strength refers to mode 1; mode j feels chi g_j / g_1.
  const double scale = 1.0 + g_ratio;
  const PulseFactory pulse = [&](double chi) {
    return qnd_xx_collective(couplings, chi * scale, kOptMode, layout);
  };
  const GaussianChannel delay(rotation("mech2", omega_ratio * phi, layout) *
                              rotation("mech1", phi, layout));
  const PulseSchedule s = schedule_for_mu(mu, phi, ancilla_vsq);
  const GaussianChannel full = assemble_squeezer(s, pulse, delay, kOptMode);
  const GaussianState anc = GaussianState::squeezed(ancilla_vsq, s.ancilla_angle, std::string(kOptMode));
  const GaussianState in = tensor(GaussianState::vacuum(ModeLayout({"mech1", "mech2"})), anc);
  const GaussianState out = apply_channel(in, full);
  const GaussianState mode1 = marginal(out, {std::string("mech1")});
  const Eigen::Matrix2d target = squeeze_target_map(mu, phi);
  return 1.0 - fidelity_zero_mean(Eigen::Matrix2d(mode1.cov()), Eigen::Matrix2d(target * target.transpose()));
}

// ---------------------------------------------------------------------------
// Runners

ExperimentOutput run_squeeze(const Config& raw) {
  const Config c = resolve_config(raw, "squeeze");
  const double mu = c.get_double("squeeze.mu");
  const double phi = c.get_double("squeeze.phi");
  const double vsq = c.get_double("ancilla.vsq");
  const LossConfig loss = loss_from(c);
  const GaussianState input = GaussianState::thermal(ModeLayout::mech(), c.get_double("input.nbar"));
  PulseSchedule s = schedule_for_mu(mu, phi, vsq);
  bool converged = true;
  if (c.get_bool("squeeze.optimize") && mu != 1.0) {
    OptimizeOptions opts;
    const std::string mode = c.get_string("squeeze.optimize_mode");
    if (mode == "full") {
      opts.mode = OptimizeMode::kFull;
    } else if (mode != "strengths") {
      throw ValidationError("config key 'squeeze.optimize_mode' must be strengths or full");
    }
    opts.input = input;
    const OptimizationResult r = optimize_schedule(mu, phi, loss, vsq, opts);
    s = r.schedule;
    converged = r.converged;
  }
  const double infid = squeezer_infidelity(build_lossy(s, loss), ancilla_state(s), input, mu, phi);
  ExperimentOutput out;
  out.table = make_table({"mu_target", "mu_realized", "phi", "chi1", "lambda", "lambda2", "chi3",
                          "theta", "ancilla_angle", "infidelity", "infidelity_classical",
                          "photon_budget", "photon_budget_approx", "optimizer_converged"},
                         c);
  out.table.add_row({mu, squeeze_factor(s), phi, s.chi1, s.lambda, s.lambda2, s.chi3, s.theta,
                     s.ancilla_angle, infid, 1.0 - classical_bound(mu), photon_budget(s),
                     mu == 1.0 ? 0.0 : approx_photon_budget(mu, phi), converged ? 1.0 : 0.0});
  out.summary = "squeeze: mu=" + fmt("%.6g", mu) + " phi=" + fmt("%.6g", phi) +
                " infidelity=" + fmt("%.6g", infid) + " classical=" +
                fmt("%.6g", 1.0 - classical_bound(mu));
  return out;
}

ExperimentOutput run_fidelity_sweep(const Config& raw) {
  const Config c = resolve_config(raw, "fidelity-sweep");
  const std::vector<double> mus = mu_values(c);
  const double phi = c.get_double("squeeze.phi");
  const double vsq = c.get_double("ancilla.vsq");
  const double nbar_m = c.get_double("physical.nbar_m");
  const double nbar_l = c.get_double("physical.nbar_l");
  const double omega = c.get_double("physical.omega_m");
  const bool optimize = c.get_bool("sweep.optimize");
  const std::vector<double> log_q = c.get_list("sweep.log10_q");
  const std::vector<double> log_eps = c.get_list("sweep.log10_epsilon");
  for (double m : mus) {
    if (!(m > 0.0)) throw ValidationError("config key 'sweep.mu': values must be positive");
  }

  std::vector<std::string> columns = {"mu", "log_mu", "infidelity_ideal"};
  std::vector<LossConfig> losses;
  for (double lq : log_q) {
    columns.push_back("infidelity_log10q_" + fmt("%.4g", lq));
    losses.push_back(LossConfig::from_quality(std::pow(10.0, lq), nbar_m, 0.0, nbar_l, omega));
  }
  for (double le : log_eps) {
    columns.push_back("infidelity_log10eps_" + fmt("%.4g", le));
    losses.push_back(LossConfig::from_quality(std::numeric_limits<double>::infinity(), nbar_m,
                                              std::pow(10.0, le), nbar_l, omega));
  }
  columns.push_back("infidelity_classical");
  const GaussianState vac = GaussianState::vacuum(ModeLayout::mech());

  const auto rows = parallel_map(mus.size(), c.get_bool("run.parallel"), [&](std::size_t i) {
    const double mu = mus[i];
    std::vector<double> row = {mu, std::log(mu),
                                lossy_infidelity(mu, phi, vsq, LossConfig::lossless(), false, vac)};
    for (const auto& loss : losses) row.push_back(lossy_infidelity(mu, phi, vsq, loss, optimize, vac));
    row.push_back(1.0 - classical_bound(mu));
    return row;
  });
  ExperimentOutput out;
  out.table = make_table(columns, c);
  for (auto r : rows) out.table.add_row(std::move(r));
  out.summary = "fidelity-sweep: " + std::to_string(rows.size()) + " mu points, " +
                std::to_string(losses.size()) + " lossy curves";
  return out;
}

ExperimentOutput run_fock_squeeze(const Config& raw) {
  const Config c = resolve_config(raw, "fock-squeeze");
  const double mu = c.get_double("squeeze.mu");
  const double phi = c.get_double("squeeze.phi");
  const double vsq = c.get_double("ancilla.vsq");
  const GridSpec spec = grid_from(c);
  const long n = c.get_int("fock.n");
  if (n < 0 || n > 3) throw ValidationError("config key 'fock.n' must be 0..3");
  const WignerGrid input = wigner_fock(static_cast<int>(n), spec);
  const SpectralEvaluator exact(input);
  const PulseSchedule s = schedule_for_mu(mu, phi, vsq);

  struct Case {
    std::string name;
    double kind;
    double epsilon;
    GaussianChannel channel;
  };
  std::vector<Case> cases;
  const ModeLayout mech = ModeLayout::mech();
  cases.push_back({"target", 0.0, 0.0,
                   GaussianChannel(LinearMap(squeeze_target_map(mu, phi), mech))});
  cases.push_back({"ideal", 1.0, 0.0,
                   mechanical_reduced_channel(build_lossy(s, LossConfig::lossless()), ancilla_state(s))});
  for (double eps : c.get_list("sweep.epsilon")) {
    const LossConfig loss = LossConfig::from_quality(
        c.get_double("physical.q"), c.get_double("physical.nbar_m"), eps,
        c.get_double("physical.nbar_l"), c.get_double("physical.omega_m"));
    cases.push_back({"lossy_eps_" + fmt("%.4g", eps), 2.0, eps,
                     mechanical_reduced_channel(build_lossy(s, loss), ancilla_state(s))});
  }

  ExperimentOutput out;
  out.table = make_table({"kind", "epsilon", "eta", "eta_exact", "integral", "clipped_mass"}, c);
  std::string summary = "fock-squeeze:";
  for (const auto& k : cases) {
    ChannelReport report;
    WignerGrid g = apply_gaussian_channel(input, k.channel, &report);
    const double eta_exact = negativity_eta(exact.evaluate(k.channel));
    out.table.add_row({k.kind, k.epsilon, negativity_eta(g), eta_exact, g.integral(),
                       report.clipped_mass});
    summary += " " + k.name + " eta=" + fmt("%.4f", eta_exact);
    out.grids.push_back({k.name, std::move(g)});
  }
  out.summary = summary;
  return out;
}

ExperimentOutput run_impulse(const Config& raw) {
  const Config c = resolve_config(raw, "impulse");
  const std::vector<double> mus = mu_values(c);
  const std::vector<double> nbars = c.get_list("impulse.nbar_in");
  const double chi = c.get_double("readout.chi");
  const double vsq = c.get_double("ancilla.vsq");
  const double phi = c.get_double("squeeze.phi");
  const double snr = c.get_double("impulse.snr");
  const LossConfig loss = loss_from(c);
  struct Point {
    double nbar;
    double mu;
  };
  std::vector<Point> points;
  for (double nb : nbars) {
    for (double mu : mus) points.push_back({nb, mu});
  }
  const auto rows = parallel_map(points.size(), c.get_bool("run.parallel"), [&](std::size_t i) {
    const auto [nb, mu] = points[i];
    const double full = d_min_full(mu, nb, chi, vsq, phi, loss, snr);
    const double approx =
        snr * d_min_approx(mu, nb, chi, vsq, phi, loss.gamma, loss.omega_m, loss.nbar_m);
    const double naive = snr * mu * std::sqrt(2.0 * nb + 1.0);
    return std::vector<double>{nb, mu, squeezing_db(mu), full, approx, naive,
                               std::abs(full - approx) / full};
  });
  ExperimentOutput out;
  out.table = make_table({"nbar_in", "mu", "squeezing_db", "d_min_full", "d_min_approx",
                          "d_min_naive", "relative_deviation"},
                         c);
  double worst = 0.0;
  for (auto r : rows) {
    if (r[2] <= 6.0 + 1e-9) worst = std::max(worst, r[6]);
    out.table.add_row(std::move(r));
  }
  out.summary = "impulse: " + std::to_string(rows.size()) +
                " points, max |full-approx|/full up to 6 dB = " + fmt("%.4f", worst);
  return out;
}

ExperimentOutput run_cat_decay(const Config& raw) {
  const Config c = resolve_config(raw, "cat-decay");
  const std::vector<double> alphas = c.get_list("cat.alpha");
  const std::vector<double> mus = mu_values(c);
  const double phi = c.get_double("squeeze.phi");
  const double vsq = c.get_double("ancilla.vsq");
  const double mu_mom = c.get_double("cat.momentum_mu");
  const LossConfig loss = loss_from(c);
  HalfLifeOptions opts;
  opts.grid = grid_from(c);
  opts.samples_per_period = static_cast<int>(c.get_int("cat.samples_per_period"));
  opts.max_periods = c.get_double("cat.max_periods");
  const double trace_periods = c.get_double("cat.trace_periods");
  if (!(trace_periods > 0.0)) throw ValidationError("config key 'cat.trace_periods' must be positive");
  const bool parallel = c.get_bool("run.parallel");
  const ModeLayout mech = ModeLayout::mech();
  auto prepare = [&](double mu) {
    const PulseSchedule s = schedule_for_mu(mu, phi, vsq);
    return mechanical_reduced_channel(build_lossy(s, loss), ancilla_state(s));
  };

  ExperimentOutput out;
  out.table = make_table({"alpha", "mu", "tau_periods", "reached", "eta0"}, c);
  ResultTable scenarios = make_table({"alpha", "scenario", "mu", "tau_periods", "reached", "eta0"}, c);
  std::string summary = "cat-decay:";
  for (double alpha : alphas) {
    const CatSpec cat{alpha, CatParity::kOdd};
    const WignerGrid initial = wigner_cat(cat, opts.grid);
    const auto sweep = parallel_map(mus.size(), parallel, [&](std::size_t i) {
      return half_life(initial, prepare(mus[i]), loss, opts);
    });
    for (std::size_t i = 0; i < mus.size(); ++i) {
      out.table.add_row({alpha, mus[i], sweep[i].tau_periods, sweep[i].reached ? 1.0 : 0.0,
                         sweep[i].eta0});
    }
    // Scenarios: 0 = no squeezing, 1 = position squeeze at mu_opt, 2 = momentum squeeze.
    const double mo = mu_opt(alpha);
    const std::vector<std::pair<double, GaussianChannel>> cases = {
        {1.0, GaussianChannel::identity(mech)}, {mo, prepare(mo)}, {mu_mom, prepare(mu_mom)}};
    std::vector<double> times;
    const auto steps = static_cast<long>(std::ceil(trace_periods * opts.samples_per_period));
    for (long k = 0; k <= steps; ++k) {
      times.push_back(2.0 * kPi / loss.omega_m * static_cast<double>(k) / opts.samples_per_period);
    }
    ResultTable trace = make_table({"t_periods", "eta_none", "eta_position", "eta_momentum"}, c);
    std::vector<std::vector<double>> etas;
    for (std::size_t k = 0; k < cases.size(); ++k) {
      const HalfLifeResult r = half_life(initial, cases[k].second, loss, opts);
      scenarios.add_row({alpha, static_cast<double>(k), cases[k].first, r.tau_periods,
                         r.reached ? 1.0 : 0.0, r.eta0});
      summary += " a=" + fmt("%g", alpha) + "/" + std::string(k == 0 ? "none" : k == 1 ? "position" : "momentum") +
                 " tau=" + fmt("%.3f", r.tau_periods);
      etas.push_back(negativity_trace(initial, cases[k].second, loss, times));
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
      trace.add_row({times[i] * loss.omega_m / (2.0 * kPi), etas[0][i], etas[1][i], etas[2][i]});
    }
    out.extra_tables.emplace_back("trace_alpha_" + fmt("%g", alpha), std::move(trace));
  }
  out.extra_tables.emplace_back("scenarios", std::move(scenarios));
  out.summary = summary + " (periods)";
  return out;
}

ExperimentOutput run_multimode(const Config& raw) {
  const Config c = resolve_config(raw, "multimode");
  const double mu = c.get_double("squeeze.mu");
  const double phi = c.get_double("squeeze.phi");
  const double omega_ratio = c.get_double("multimode.omega_ratio");
  const double vsq = c.get_double("ancilla.vsq");
  ExperimentOutput out;
  out.table = make_table({"g_ratio", "infidelity"}, c);
  std::string summary = "multimode:";
  for (double g : c.get_list("multimode.g_ratio")) {
    const double infid = multimode_infidelity(g, mu, phi, omega_ratio, vsq);
    out.table.add_row({g, infid});
    summary += " g2/g1=" + fmt("%g", g) + " I=" + fmt("%.4f", infid);
  }
  out.summary = summary;
  return out;
}

ExperimentOutput run_photon_budget(const Config& raw) {
  const Config c = resolve_config(raw, "photon-budget");
  const double phi = c.get_double("squeeze.phi");
  ExperimentOutput out;
  out.table = make_table({"mu", "phi", "lambda_approx", "lambda_exact", "chi1", "lambda",
                          "lambda2", "chi3"},
                         c);
  std::string summary = "photon-budget:";
  for (double mu : c.get_list("squeeze.mu")) {
    const PulseSchedule s = schedule_for_mu(mu, phi, 1.0);
    const double approx = mu == 1.0 ? 0.0 : approx_photon_budget(mu, phi);
    const double exact = photon_budget(s);
    out.table.add_row({mu, phi, approx, exact, s.chi1, s.lambda, s.lambda2, s.chi3});
    summary += " mu=" + fmt("%.6g", mu) + " phi=" + fmt("%.6g", phi) + " Lambda=" +
               fmt("%.1f", approx) + " (exact sum " + fmt("%.1f", exact) + ")";
  }
  out.summary = summary;
  return out;
}

ExperimentOutput run_regime_check(const Config& raw) {
  const Config c = resolve_config(raw, "regime-check");
  const RegimeReport report =
      regime_check(c.get_double("regime.g0"), c.get_double("regime.omega_m"),
                   c.get_double("regime.kappa"), c.get_double("regime.pulse_bandwidth"),
                   c.get_double("regime.margin"));
  ExperimentOutput out;
  out.table = make_table({"check", "small", "large", "ratio", "passed"}, c);
  std::string summary = "regime-check:";
  for (std::size_t i = 0; i < report.checks.size(); ++i) {
    const RegimeCheck& k = report.checks[i];
    out.table.add_row({static_cast<double>(i), k.small, k.large, k.large / k.small,
                       k.passed ? 1.0 : 0.0});
    summary += " " + k.name + (k.passed ? "=ok" : "=WARN(" + k.relation + ")");
  }
  out.summary = summary;
  return out;
}

ExperimentOutput run_experiment(const Config& config) {
  const std::string name = config.get_string("experiment");
  if (name == "squeeze") return run_squeeze(config);
  if (name == "fidelity-sweep") return run_fidelity_sweep(config);
  if (name == "fock-squeeze") return run_fock_squeeze(config);
  if (name == "impulse") return run_impulse(config);
  if (name == "cat-decay") return run_cat_decay(config);
  if (name == "multimode") return run_multimode(config);
  if (name == "photon-budget") return run_photon_budget(config);
  if (name == "regime-check") return run_regime_check(config);
  throw ValidationError("unknown experiment '" + name + "'");
}

}  // namespace optosqueeze
