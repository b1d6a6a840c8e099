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

// Pulsed-optomechanics squeezer built from X-X QND pulses.
//
// The four-pulse sequence, in temporal order, is
//
//   pulse(chi1) -> R_L(pi/2) -> pulse(lambda) -> [delay: R_M(phi), loss]
//     -> pulse(-lambda / cos phi) -> R_L(theta - pi/2) -> pulse(chi3)
//
// where the middle three elements approximate a P-X interaction and theta
// moves the residual X_L^2 (Kerr-like) term off the quadrature read by the
// final pulse. The mechanical output is R_M(phi) diag(1/mu, mu) plus a residual
// (1 - mu) tan(phi) P_M term in X_M and ancilla noise.

#ifndef OPTOSQUEEZE_SQUEEZER_HPP
#define OPTOSQUEEZE_SQUEEZER_HPP

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "optosqueeze/gaussian_state.hpp"
#include "optosqueeze/quadrature.hpp"

namespace optosqueeze {

inline constexpr std::string_view kMechMode = "mech";
inline constexpr std::string_view kOptMode = "opt";

struct PulseSchedule {
  double chi1 = 0.0;
  double lambda = 0.0;
  /// Strength of the pulse that closes the P-X approximation, -lambda / cos(phi).
  double lambda2 = 0.0;
  double chi3 = 0.0;
  /// Mechanical rotation angle between the second and third pulses.
  double phi = 0.0;
  /// Optical rotation that cancels the Kerr-like term.
  double theta = 0.0;
  double ancilla_vsq = 1.0;
  double ancilla_angle = 0.0;
};

/// mu = 1 / (1 + lambda chi1 tan(phi)).
double squeeze_factor(const PulseSchedule& schedule);

/// Throws ValidationError if the schedule is not finite or mu is not positive.
void validate(const PulseSchedule& schedule);

struct LossConfig {
  double gamma = 0.0;    // mechanical energy damping rate
  double omega_m = 1.0;  // mechanical angular frequency
  double nbar_m = 0.0;   // mechanical bath occupancy
  double epsilon = 0.0;  // delay-line loss fraction
  double nbar_l = 0.0;   // optical bath occupancy

  static LossConfig lossless() { return {}; }
  /// gamma = omega_m / q; an infinite q gives gamma = 0.
  static LossConfig from_quality(double q, double nbar_m, double epsilon = 0.0,
                                 double nbar_l = 0.0, double omega_m = 1.0);

  void validate() const;
  /// Physical delay that produces a mechanical phase advance phi:
  /// t = phi / (sigma omega_m).
  double delay_time(double phi) const;
};

/// chi2 = -(1/chi1 + 1/chi3).
double chi2_for(double chi1, double chi3);

/// Three-pulse squeezer M_XX(chi3) M_PP(chi2) M_XX(chi1) on (mech, opt).
LinearMap build_ideal_O(double chi1, double chi3);

/// chi3 = -chi1 sqrt(1 + lambda^4 tan^2 phi) / (cos phi + lambda chi1 sin phi).
double chi3_for(double chi1, double lambda, double phi);

/// Principal-branch solution of tan(theta) = -lambda^2 tan(phi).
double theta_for(double lambda, double phi);

/// Analytic schedule for a target squeeze factor. mu = 1 returns all-zero
/// strengths. lambda = chi1 (mu < 1) or -chi1 (mu > 1), chi1 >= 0, and the
/// ancilla is squeezed at sgn(1 - mu) pi / 4.
PulseSchedule schedule_for_mu(double mu, double phi, double ancilla_vsq);

/// Schedule from free pulse strengths with the dependent quantities (chi3,
/// theta, lambda2) filled in from their selection rules.
PulseSchedule schedule_from_strengths(double chi1, double lambda, double phi,
                                      double ancilla_vsq, double ancilla_angle);

/// X-X pulse factory used to assemble a squeezer on an arbitrary layout.
using PulseFactory = std::function<LinearMap(double chi)>;

/// Assemble the four-pulse sequence. `delay` is whatever acts between the
/// second and third pulses (mechanical evolution plus any loss).
GaussianChannel assemble_squeezer(const PulseSchedule& schedule, const PulseFactory& pulse,
                                  const GaussianChannel& delay, std::string_view optical_mode);

/// Lossless four-pulse squeezer on (mech, opt).
LinearMap build_obar(const PulseSchedule& schedule);

/// Squeezer with mechanical damping during the delay t = phi / (sigma omega_m)
/// and a delay-line beamsplitter loss. Reduces to build_obar when lossless.
GaussianChannel build_lossy(const PulseSchedule& schedule, const LossConfig& loss);

/// Optical ancilla state prescribed by the schedule, on mode "opt".
GaussianState ancilla_state(const PulseSchedule& schedule);

/// Trace out one mode fed with a known Gaussian input: the remaining modes see
/// map = kept block, noise = B V_anc B^T + kept noise, drift = B m_anc + d.
GaussianChannel reduced_channel(const GaussianChannel& channel, const GaussianState& ancilla,
                                std::string_view ancilla_mode);

/// Single-mode mechanical channel of a (mech, opt) squeezer.
GaussianChannel mechanical_reduced_channel(const GaussianChannel& channel,
                                           const GaussianState& ancilla);

/// 1 - F between the squeezer output for `input` and the ideal target
/// R(phi) diag(1/mu_target, mu_target) applied to `input` (single mech mode).
double squeezer_infidelity(const GaussianChannel& squeezer, const GaussianState& ancilla,
                           const GaussianState& input, double mu_target, double phi);

/// Lambda = chi1^2 + lambda^2 + lambda2^2 + chi3^2.
double photon_budget(const PulseSchedule& schedule);
/// Small-phi estimate |1 - 1/mu| (3 + (1 + (1 - 1/mu)^2) / mu^2) / tan(phi).
double approx_photon_budget(double mu, double phi);

/// chi = -8 g0 sqrt(N) / kappa.
double chi_from_physical(double g0, double photon_number, double kappa);
/// Inverse of chi_from_physical for the photon number.
double photon_number_for_chi(double chi, double g0, double kappa);

struct RegimeCheck {
  std::string name;
  std::string relation;  // e.g. "g0 << omega_m"
  double small = 0.0;
  double large = 0.0;
  bool passed = false;
};

struct RegimeReport {
  std::vector<RegimeCheck> checks;
  bool all_passed() const;
};

/// Validity of the pulsed QND picture: g0 << omega_m, omega_m << kappa,
/// omega_m << pulse bandwidth << kappa, each by at least `margin`.
RegimeReport regime_check(double g0, double omega_m, double kappa, double pulse_bandwidth,
                          double margin = 10.0);

enum class OptimizeMode {
  /// Free (chi1, lambda); chi3 and theta from their selection rules and the
  /// ancilla squeezed along the noise quadrature atan(lambda / chi1).
  kStrengths,
  /// Free (chi1, lambda, chi3, theta, ancilla_angle).
  kFull,
};

struct OptimizeOptions {
  OptimizeMode mode = OptimizeMode::kStrengths;
  /// Half-width of the search box, relative to max(|seed|, 1) per parameter.
  double box_fraction = 0.5;
  int max_iterations = 4000;
  double size_tolerance = 1e-7;
  /// Mechanical input used to score the schedule; vacuum when empty.
  std::optional<GaussianState> input;
};

struct OptimizationResult {
  PulseSchedule schedule;
  double objective = 0.0;
  double seed_objective = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Local Nelder-Mead re-optimization of the pulse schedule for minimum
/// infidelity to the target, seeded with schedule_for_mu.
OptimizationResult optimize_schedule(double mu_target, double phi, const LossConfig& loss,
                                     double ancilla_vsq, const OptimizeOptions& options = {});

}  // namespace optosqueeze

#endif  // OPTOSQUEEZE_SQUEEZER_HPP
