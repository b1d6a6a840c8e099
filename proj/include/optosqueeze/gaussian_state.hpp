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

#ifndef OPTOSQUEEZE_GAUSSIAN_STATE_HPP
#define OPTOSQUEEZE_GAUSSIAN_STATE_HPP

#include <span>
#include <string>
#include <string_view>

#include "optosqueeze/quadrature.hpp"

namespace optosqueeze {

/// Gaussian state in hbar = 2 units (vacuum covariance = identity).
class GaussianState {
 public:
  /// Validates symmetry and the uncertainty relation cov + i Omega >= 0.
  GaussianState(Vector mean, Matrix cov, ModeLayout layout);

  static GaussianState vacuum(const ModeLayout& layout);
  /// Every mode thermal with covariance (2 nbar + 1) I.
  static GaussianState thermal(const ModeLayout& layout, double nbar);
  /// Single-mode squeezed vacuum: variance `vsq` along the quadrature
  /// X cos(angle) + P sin(angle), 1/vsq along the orthogonal one.
  static GaussianState squeezed(double vsq, double angle, std::string label = "mech");
  /// Single-mode coherent state with the given (X, P) mean.
  static GaussianState coherent(const Eigen::Vector2d& mean, std::string label = "mech");

  const Vector& mean() const { return mean_; }
  const Matrix& cov() const { return cov_; }
  const ModeLayout& layout() const { return layout_; }

 private:
  Vector mean_;
  Matrix cov_;
  ModeLayout layout_;
};

/// Covariance of the single-mode squeezed vacuum described above.
Eigen::Matrix2d squeezed_covariance(double vsq, double angle);

/// Product state; the layout concatenates the factors' labels.
GaussianState tensor(const GaussianState& a, const GaussianState& b);

/// mean' = M mean + d,  cov' = M cov M^T + N.
GaussianState apply_channel(const GaussianState& state, const GaussianChannel& channel);

/// Reduced state on the listed modes, in the order given.
GaussianState marginal(const GaussianState& state, std::span<const std::string> modes);
GaussianState marginal(const GaussianState& state, std::initializer_list<std::string> modes);

/// Fidelity between two zero-mean single-mode Gaussian states. Nonzero means
/// are rejected; use mean_distance to compare displacements.
double fidelity_zero_mean(const GaussianState& a, const GaussianState& b);
double fidelity_zero_mean(const Eigen::Matrix2d& a, const Eigen::Matrix2d& b);

/// Euclidean distance between the mean vectors (same layout required).
double mean_distance(const GaussianState& a, const GaussianState& b);

/// Closed-form fidelity of the optimally tuned four-pulse squeezer for a pure
/// input with momentum variance v_p and ancilla squeezed variance v_sq.
double pure_fidelity(double mu, double phi, double v_p, double v_sq);

/// Best fidelity attainable by clone / measure / feed-forward squeezing.
double classical_bound(double mu);

/// Unitary squeezer diag(1/mu, mu) on (X, P), followed by a rotation through
/// phi. With phi = 0 this is the ideal target transformation.
Eigen::Matrix2d squeeze_target_map(double mu, double phi);

}  // namespace optosqueeze

#endif  // OPTOSQUEEZE_GAUSSIAN_STATE_HPP
