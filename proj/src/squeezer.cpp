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

#include "optosqueeze/squeezer.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include "optosqueeze/errors.hpp"

namespace optosqueeze {

namespace {

constexpr double kPi = std::numbers::pi;

void require_finite(double value, const char* what) {
  if (!std::isfinite(value)) throw ValidationError(std::string(what) + " must be finite");
}

void require_phi(double phi) {
  require_finite(phi, "phi");
  if (!(phi > 0.0 && phi < kPi / 2.0)) throw ValidationError("phi must lie in (0, pi/2)");
}

double sign(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

// ---------------------------------------------------------------------------
// Schedules

double squeeze_factor(const PulseSchedule& s) {
  return 1.0 / (1.0 + s.lambda * s.chi1 * std::tan(s.phi));
}

void validate(const PulseSchedule& s) {
  for (double v : {s.chi1, s.lambda, s.lambda2, s.chi3, s.phi, s.theta, s.ancilla_vsq,
                   s.ancilla_angle}) {
    require_finite(v, "pulse schedule entry");
  }
  if (s.ancilla_vsq <= 0.0) throw ValidationError("ancilla variance must be positive");
  const double mu = squeeze_factor(s);
  if (!std::isfinite(mu) || mu <= 0.0) {
    throw ValidationError("schedule does not give a finite positive squeeze factor");
  }
}

LossConfig LossConfig::from_quality(double q, double nbar_m, double epsilon, double nbar_l,
                                    double omega_m) {
  if (!(q > 0.0)) throw ValidationError("quality factor must be positive");
  LossConfig loss;
  loss.omega_m = omega_m;
  loss.gamma = std::isinf(q) ? 0.0 : omega_m / q;
  loss.nbar_m = nbar_m;
  loss.epsilon = epsilon;
  loss.nbar_l = nbar_l;
  loss.validate();
  return loss;
}

void LossConfig::validate() const {
  for (double v : {gamma, omega_m, nbar_m, epsilon, nbar_l}) require_finite(v, "loss parameter");
  if (gamma < 0.0 || nbar_m < 0.0 || nbar_l < 0.0) {
    throw ValidationError("loss parameters must be nonnegative");
  }
  if (omega_m <= 0.0) throw ValidationError("omega_m must be positive");
  if (gamma >= 2.0 * omega_m) throw ValidationError("overdamped mechanics (gamma >= 2 omega_m)");
  if (epsilon < 0.0 || epsilon > 1.0) throw ValidationError("epsilon must lie in [0, 1]");
}

double LossConfig::delay_time(double phi) const {
  return phi / (sigma_factor(gamma, omega_m) * omega_m);
}

double chi2_for(double chi1, double chi3) {
  require_finite(chi1, "chi1");
  require_finite(chi3, "chi3");
  if (chi1 == 0.0 || chi3 == 0.0) throw ValidationError("chi1 and chi3 must be nonzero");
  return -(1.0 / chi1 + 1.0 / chi3);
}

LinearMap build_ideal_O(double chi1, double chi3) {
  const double chi2 = chi2_for(chi1, chi3);
  const ModeLayout layout = ModeLayout::mech_opt();
  return qnd_xx(chi3, kMechMode, kOptMode, layout) * qnd_pp(chi2, kMechMode, kOptMode, layout) *
         qnd_xx(chi1, kMechMode, kOptMode, layout);
}

double chi3_for(double chi1, double lambda, double phi) {
  require_finite(chi1, "chi1");
  require_finite(lambda, "lambda");
  require_finite(phi, "phi");
  const double denom = std::cos(phi) + lambda * chi1 * std::sin(phi);
  if (std::abs(denom) < 1e-12) {
    throw ValidationError("unreachable squeeze factor: chi3 denominator vanishes");
  }
  const double t = std::tan(phi);
  return -chi1 * std::sqrt(1.0 + std::pow(lambda, 4) * t * t) / denom;
}

double theta_for(double lambda, double phi) {
  require_finite(lambda, "lambda");
  require_finite(phi, "phi");
  return std::atan(-lambda * lambda * std::tan(phi));
}

PulseSchedule schedule_from_strengths(double chi1, double lambda, double phi, double ancilla_vsq,
                                      double ancilla_angle) {
  PulseSchedule s;
  s.chi1 = chi1;
  s.lambda = lambda;
  s.phi = phi;
  s.lambda2 = -lambda / std::cos(phi);
  s.chi3 = chi3_for(chi1, lambda, phi);
  s.theta = theta_for(lambda, phi);
  s.ancilla_vsq = ancilla_vsq;
  s.ancilla_angle = ancilla_angle;
  validate(s);
  return s;
}

PulseSchedule schedule_for_mu(double mu, double phi, double ancilla_vsq) {
  require_finite(mu, "mu");
  if (mu <= 0.0) throw ValidationError("mu must be positive");
  require_phi(phi);
  if (!(ancilla_vsq > 0.0)) throw ValidationError("ancilla variance must be positive");
  if (mu == 1.0) {
    PulseSchedule s;
    s.phi = phi;
    s.ancilla_vsq = ancilla_vsq;
    return s;
  }
  // lambda chi1 tan(phi) = 1/mu - 1 with |lambda| = |chi1| minimises the
  // ancilla-noise coefficient sqrt(lambda^2 + chi1^2) tan(phi).
  const double chi1 = std::sqrt(std::abs(1.0 / mu - 1.0) / std::tan(phi));
  const double lambda = mu < 1.0 ? chi1 : -chi1;
  return schedule_from_strengths(chi1, lambda, phi, ancilla_vsq, sign(1.0 - mu) * kPi / 4.0);
}

// ---------------------------------------------------------------------------
// Assembly

GaussianChannel assemble_squeezer(const PulseSchedule& s, const PulseFactory& pulse,
                                  const GaussianChannel& delay, std::string_view optical_mode) {
  validate(s);
  const ModeLayout& layout = delay.layout();
  const std::array<GaussianChannel, 7> stages = {
      GaussianChannel(pulse(s.chi1)),
      GaussianChannel(rotation(optical_mode, kPi / 2.0, layout)),
      GaussianChannel(pulse(s.lambda)),
      delay,
      GaussianChannel(pulse(s.lambda2)),
      GaussianChannel(rotation(optical_mode, s.theta - kPi / 2.0, layout)),
      GaussianChannel(pulse(s.chi3)),
  };
  return compose(stages);
}

namespace {

PulseFactory single_mode_pulse(const ModeLayout& layout) {
  return [layout](double chi) { return qnd_xx(chi, kMechMode, kOptMode, layout); };
}

}  // namespace

LinearMap build_obar(const PulseSchedule& schedule) {
  const ModeLayout layout = ModeLayout::mech_opt();
  const GaussianChannel delay(rotation(kMechMode, schedule.phi, layout));
  return assemble_squeezer(schedule, single_mode_pulse(layout), delay, kOptMode).map();
}

GaussianChannel build_lossy(const PulseSchedule& schedule, const LossConfig& loss) {
  loss.validate();
  const ModeLayout layout = ModeLayout::mech_opt();
  const double t = loss.delay_time(schedule.phi);
  const GaussianChannel delay =
      compose({damped_evolution(loss.gamma, loss.omega_m, loss.nbar_m, t, kMechMode, layout),
               beamsplitter_loss(loss.epsilon, loss.nbar_l, kOptMode, layout)});
  return assemble_squeezer(schedule, single_mode_pulse(layout), delay, kOptMode);
}

GaussianState ancilla_state(const PulseSchedule& schedule) {
  return GaussianState::squeezed(schedule.ancilla_vsq, schedule.ancilla_angle,
                                 std::string(kOptMode));
}

GaussianChannel reduced_channel(const GaussianChannel& channel, const GaussianState& ancilla,
                                std::string_view ancilla_mode) {
  const ModeLayout& layout = channel.layout();
  if (ancilla.layout().mode_count() != 1) {
    throw ValidationError("ancilla must be a single-mode state");
  }
  const std::size_t anc = layout.index_of(ancilla_mode);
  std::vector<std::string> kept_labels;
  std::vector<Eigen::Index> kept;
  for (std::size_t m = 0; m < layout.mode_count(); ++m) {
    if (m == anc) continue;
    kept_labels.push_back(layout.labels()[m]);
    kept.push_back(static_cast<Eigen::Index>(2 * m));
    kept.push_back(static_cast<Eigen::Index>(2 * m + 1));
  }
  if (kept.empty()) throw ValidationError("reduced channel would have no modes");
  const auto n = static_cast<Eigen::Index>(kept.size());
  const auto a0 = static_cast<Eigen::Index>(2 * anc);
  const Matrix& full = channel.map().matrix();
  Matrix map(n, n);
  Matrix feed(n, 2);
  Vector drift(n);
  Matrix noise(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      map(i, j) = full(kept[i], kept[j]);
      noise(i, j) = channel.noise().covariance()(kept[i], kept[j]);
    }
    feed(i, 0) = full(kept[i], a0);
    feed(i, 1) = full(kept[i], a0 + 1);
    drift(i) = channel.noise().mean()(kept[i]);
  }
  drift += feed * ancilla.mean();
  // Through a square root of the ancilla covariance, so strongly squeezed
  // ancillas cannot produce a roundoff-negative noise matrix.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(Eigen::Matrix2d(ancilla.cov()));
  const Matrix root =
      feed * eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
  noise += root * root.transpose();
  ModeLayout reduced(std::move(kept_labels));
  return GaussianChannel(LinearMap(std::move(map), reduced),
                         NoiseTerm(std::move(drift), 0.5 * (noise + noise.transpose())));
}

GaussianChannel mechanical_reduced_channel(const GaussianChannel& channel,
                                           const GaussianState& ancilla) {
  if (!(channel.layout() == ModeLayout::mech_opt())) {
    throw ValidationError("mechanical_reduced_channel expects a (mech, opt) channel");
  }
  return reduced_channel(channel, ancilla, kOptMode);
}

double squeezer_infidelity(const GaussianChannel& squeezer, const GaussianState& ancilla,
                           const GaussianState& input, double mu_target, double phi) {
  const GaussianChannel reduced = reduced_channel(squeezer, ancilla, kOptMode);
  if (!(reduced.layout() == input.layout()) || input.layout().mode_count() != 1) {
    throw ValidationError("squeezer_infidelity expects a single mechanical input mode");
  }
  const Eigen::Matrix2d out =
      reduced.map().matrix() * input.cov() * reduced.map().matrix().transpose() +
      reduced.noise().covariance();
  const Eigen::Matrix2d s = squeeze_target_map(mu_target, phi);
  const Eigen::Matrix2d target = s * input.cov() * s.transpose();
  return 1.0 - fidelity_zero_mean(out, target);
}

// ---------------------------------------------------------------------------
// Photon budget and physical units

double photon_budget(const PulseSchedule& s) {
  return s.chi1 * s.chi1 + s.lambda * s.lambda + s.lambda2 * s.lambda2 + s.chi3 * s.chi3;
}

double approx_photon_budget(double mu, double phi) {
  require_finite(mu, "mu");
  if (mu <= 0.0) throw ValidationError("mu must be positive");
  require_phi(phi);
  const double d = 1.0 - 1.0 / mu;
  return std::abs(d) * (3.0 + (1.0 + d * d) / (mu * mu)) / std::tan(phi);
}

double chi_from_physical(double g0, double photon_number, double kappa) {
  require_finite(g0, "g0");
  require_finite(photon_number, "photon number");
  require_finite(kappa, "kappa");
  if (kappa <= 0.0) throw ValidationError("kappa must be positive");
  if (photon_number < 0.0) throw ValidationError("photon number must be nonnegative");
  return -8.0 * g0 * std::sqrt(photon_number) / kappa;
}

double photon_number_for_chi(double chi, double g0, double kappa) {
  require_finite(chi, "chi");
  if (!(g0 != 0.0) || !(kappa > 0.0)) throw ValidationError("need g0 != 0 and kappa > 0");
  const double root = -chi * kappa / (8.0 * g0);
  if (root < 0.0) throw ValidationError("chi has the wrong sign for this g0");
  return root * root;
}

bool RegimeReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const RegimeCheck& c) { return c.passed; });
}

RegimeReport regime_check(double g0, double omega_m, double kappa, double pulse_bandwidth,
                          double margin) {
  for (double v : {g0, omega_m, kappa, pulse_bandwidth, margin}) {
    require_finite(v, "regime parameter");
    if (v <= 0.0) throw ValidationError("regime parameters must be positive");
  }
  RegimeReport report;
  auto add = [&](std::string name, std::string relation, double small, double large) {
    report.checks.push_back({std::move(name), std::move(relation), small, large,
                             small * margin <= large});
  };
  add("weak-coupling", "g0 << omega_m", g0, omega_m);
  add("unresolved-sideband", "omega_m << kappa", omega_m, kappa);
  add("short-pulse", "omega_m << pulse_bandwidth", omega_m, pulse_bandwidth);
  add("pulse-distortion", "pulse_bandwidth << kappa", pulse_bandwidth, kappa);
  return report;
}

// ---------------------------------------------------------------------------
// Numerical re-optimization

namespace {

struct ObjectiveContext {
  double mu_target;
  double phi;
  LossConfig loss;
  double ancilla_vsq;
  OptimizeMode mode;
  GaussianState input;
  std::vector<double> lower;
  std::vector<double> upper;
};

PulseSchedule schedule_from_parameters(const ObjectiveContext& ctx, const double* x) {
  if (ctx.mode == OptimizeMode::kStrengths) {
    const double angle = (x[0] == 0.0 && x[1] == 0.0) ? 0.0 : std::atan2(x[1], x[0]);
    // Noise quadrature angle atan(lambda / chi1), folded into (-pi/2, pi/2].
    const double folded = angle > kPi / 2.0 ? angle - kPi : (angle <= -kPi / 2.0 ? angle + kPi : angle);
    return schedule_from_strengths(x[0], x[1], ctx.phi, ctx.ancilla_vsq, folded);
  }
  PulseSchedule s;
  s.chi1 = x[0];
  s.lambda = x[1];
  s.chi3 = x[2];
  s.theta = x[3];
  s.ancilla_angle = x[4];
  s.phi = ctx.phi;
  s.lambda2 = -s.lambda / std::cos(ctx.phi);
  s.ancilla_vsq = ctx.ancilla_vsq;
  validate(s);
  return s;
}

double evaluate(const ObjectiveContext& ctx, const PulseSchedule& s) {
  return squeezer_infidelity(build_lossy(s, ctx.loss), ancilla_state(s), ctx.input, ctx.mu_target,
                             ctx.phi);
}

double objective(const gsl_vector* v, void* params) {
  const auto& ctx = *static_cast<const ObjectiveContext*>(params);
  std::array<double, 5> x{};
  double outside = 0.0;
  for (std::size_t i = 0; i < ctx.lower.size(); ++i) {
    x[i] = gsl_vector_get(v, i);
    outside += std::max(0.0, ctx.lower[i] - x[i]) + std::max(0.0, x[i] - ctx.upper[i]);
  }
  if (outside > 0.0) return 1e3 + outside;
  try {
    const double value = evaluate(ctx, schedule_from_parameters(ctx, x.data()));
    return std::isfinite(value) ? value : 1e3;
  } catch (const std::exception&) {
    return 1e3;
  }
}

struct MinimizerDeleter {
  void operator()(gsl_multimin_fminimizer* m) const { gsl_multimin_fminimizer_free(m); }
};
struct VectorDeleter {
  void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};

}  // namespace

OptimizationResult optimize_schedule(double mu_target, double phi, const LossConfig& loss,
                                     double ancilla_vsq, const OptimizeOptions& options) {
  loss.validate();
  const PulseSchedule seed = schedule_for_mu(mu_target, phi, ancilla_vsq);
  ObjectiveContext ctx{mu_target,
                       phi,
                       loss,
                       ancilla_vsq,
                       options.mode,
                       options.input.value_or(GaussianState::vacuum(ModeLayout::mech())),
                       {},
                       {}};
  std::vector<double> x0 = {seed.chi1, seed.lambda};
  if (options.mode == OptimizeMode::kFull) {
    x0.insert(x0.end(), {seed.chi3, seed.theta, seed.ancilla_angle});
  }
  for (double v : x0) {
    const double half = options.box_fraction * std::max(std::abs(v), 1.0);
    ctx.lower.push_back(v - half);
    ctx.upper.push_back(v + half);
  }

  OptimizationResult result;
  result.schedule = seed;
  result.seed_objective = evaluate(ctx, seed);
  result.objective = result.seed_objective;

  const std::size_t n = x0.size();
  gsl_set_error_handler_off();
  std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter> minimizer(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n));
  std::unique_ptr<gsl_vector, VectorDeleter> start(gsl_vector_alloc(n));
  std::unique_ptr<gsl_vector, VectorDeleter> step(gsl_vector_alloc(n));
  for (std::size_t i = 0; i < n; ++i) {
    gsl_vector_set(start.get(), i, x0[i]);
    gsl_vector_set(step.get(), i, 0.05 * std::max(std::abs(x0[i]), 0.2));
  }
  gsl_multimin_function fn{&objective, n, &ctx};
  gsl_multimin_fminimizer_set(minimizer.get(), &fn, start.get(), step.get());

  int status = GSL_CONTINUE;
  int iter = 0;
  while (status == GSL_CONTINUE && iter < options.max_iterations) {
    ++iter;
    if (gsl_multimin_fminimizer_iterate(minimizer.get()) != GSL_SUCCESS) break;
    status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(minimizer.get()),
                                    options.size_tolerance);
  }
  result.iterations = iter;
  result.converged = status == GSL_SUCCESS;
  if (!result.converged) return result;

  std::array<double, 5> best{};
  for (std::size_t i = 0; i < n; ++i) best[i] = gsl_vector_get(minimizer->x, i);
  const double best_value = minimizer->fval;
  if (best_value < result.seed_objective) {
    result.schedule = schedule_from_parameters(ctx, best.data());
    result.objective = evaluate(ctx, result.schedule);
  }
  return result;
}

}  // namespace optosqueeze
