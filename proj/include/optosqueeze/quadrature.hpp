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

// N-mode quadrature algebra.
//
// Conventions used throughout the library:
//  * quadrature vectors are ordered (X_1, P_1, X_2, P_2, ...);
//  * [X, P] = 2i, so the vacuum covariance is the identity;
//  * rotation(angle) maps X -> X cos(angle) + P sin(angle) and
//    P -> -X sin(angle) + P cos(angle); rotation(pi/2) sends X to P and P to -X.
//    This is the sense in which a free mechanical oscillator turns
//    (X' = omega P), so lossy_rotation with zero damping equals rotation(omega t).
//
// Channels act as X' = M X + F with F Gaussian (mean, covariance).

#ifndef OPTOSQUEEZE_QUADRATURE_HPP
#define OPTOSQUEEZE_QUADRATURE_HPP

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace optosqueeze {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Names and ordering of the bosonic modes a quadrature vector refers to.
class ModeLayout {
 public:
  explicit ModeLayout(std::vector<std::string> labels);

  /// The two-mode (mechanics, optical ancilla) layout used by the squeezer.
  static ModeLayout mech_opt();
  /// Single mechanical mode.
  static ModeLayout mech();

  std::size_t mode_count() const { return labels_.size(); }
  std::size_t dimension() const { return 2 * labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }

  /// Throws ValidationError for an unknown label.
  std::size_t index_of(std::string_view label) const;
  bool contains(std::string_view label) const;
  std::size_t x_index(std::string_view label) const { return 2 * index_of(label); }
  std::size_t p_index(std::string_view label) const { return 2 * index_of(label) + 1; }

  bool operator==(const ModeLayout&) const = default;

 private:
  std::vector<std::string> labels_;
};

/// Real 2N x 2N linear map on quadratures.
class LinearMap {
 public:
  LinearMap(Matrix matrix, ModeLayout layout);

  static LinearMap identity(const ModeLayout& layout);

  const Matrix& matrix() const { return matrix_; }
  const ModeLayout& layout() const { return layout_; }

  /// 2x2 block mapping mode `from` into mode `to`.
  Eigen::Matrix2d block(std::string_view to, std::string_view from) const;

 private:
  Matrix matrix_;
  ModeLayout layout_;
};

/// Matrix product: `later * earlier` applies `earlier` first.
LinearMap operator*(const LinearMap& later, const LinearMap& earlier);

/// Additive Gaussian noise (mean drift and covariance).
class NoiseTerm {
 public:
  NoiseTerm(Vector mean, Matrix covariance);

  static NoiseTerm zero(const ModeLayout& layout);

  const Vector& mean() const { return mean_; }
  const Matrix& covariance() const { return covariance_; }

 private:
  Vector mean_;
  Matrix covariance_;
};

class GaussianChannel {
 public:
  GaussianChannel(LinearMap map, NoiseTerm noise);
  /// Noiseless channel.
  explicit GaussianChannel(LinearMap map);

  static GaussianChannel identity(const ModeLayout& layout);

  const LinearMap& map() const { return map_; }
  const NoiseTerm& noise() const { return noise_; }
  const ModeLayout& layout() const { return map_.layout(); }

 private:
  LinearMap map_;
  NoiseTerm noise_;
};

/// Block-diagonal symplectic form with blocks [[0, 1], [-1, 0]].
Matrix symplectic_form(std::size_t mode_count);

/// max |M Omega M^T - Omega|, zero for exactly symplectic maps.
double symplectic_defect(const LinearMap& map);

/// Smallest eigenvalue of the Hermitian matrix V + i Omega. Nonnegative for
/// covariances that satisfy the uncertainty principle.
double uncertainty_margin(const Matrix& covariance);

/// Operational physicality test: the smallest uncertainty margin of the
/// channel output over vacuum and 20 dB squeezed inputs at eight angles.
double physicality_margin(const GaussianChannel& channel);

// ---------------------------------------------------------------------------
// Primitive interactions

/// X-X QND: P_b += chi X_a and P_a += chi X_b.
LinearMap qnd_xx(double chi, std::string_view mode_a, std::string_view mode_b,
                 const ModeLayout& layout);

/// P-P QND: X_b += chi P_a and X_a += chi P_b.
LinearMap qnd_pp(double chi, std::string_view mode_a, std::string_view mode_b,
                 const ModeLayout& layout);

LinearMap rotation(std::string_view mode, double angle, const ModeLayout& layout);

/// sqrt(1 - gamma^2 / (4 omega^2)). Rejects gamma >= 2 omega (overdamped) with
/// the single exception gamma == 2 omega, which returns 0.
double sigma_factor(double gamma, double omega);

/// 2x2 propagator of the momentum-damped oscillator over time t.
Eigen::Matrix2d lossy_rotation_block(double gamma, double omega, double t);

LinearMap lossy_rotation(double gamma, double omega, double t, std::string_view mode,
                         const ModeLayout& layout);

/// Covariance of the thermal force integrated over [0, t] (zero mean).
Eigen::Matrix2d thermal_noise_block(double gamma, double omega, double nbar, double t);

NoiseTerm thermal_noise_cov(double gamma, double omega, double nbar, double t,
                            std::string_view mode, const ModeLayout& layout);

/// Lossy rotation plus its thermal noise, as one channel.
GaussianChannel damped_evolution(double gamma, double omega, double nbar, double t,
                                 std::string_view mode, const ModeLayout& layout);

/// Beamsplitter coupling to a thermal mode of occupancy nbar with reflectivity
/// epsilon: both quadratures scale by sqrt(1 - epsilon) and gain
/// epsilon (2 nbar + 1) of noise.
GaussianChannel beamsplitter_loss(double epsilon, double nbar, std::string_view mode,
                                  const ModeLayout& layout);

/// Composition in temporal order: channels[0] acts first.
GaussianChannel compose(std::span<const GaussianChannel> channels);
GaussianChannel compose(std::initializer_list<GaussianChannel> channels);

struct ModeCoupling {
  std::string mode;
  double coupling;  // single-photon rate g_j, nonnegative
};

/// One optical pulse coupling several mechanical modes. The optical phase picks
/// up chi_total * sum_j(g_j X_j) / sum_j(g_j) and mechanical mode j receives the
/// back-action share chi_total * g_j / sum(g) of X_L.
LinearMap qnd_xx_collective(std::span<const ModeCoupling> couplings, double chi_total,
                            std::string_view optical_mode, const ModeLayout& layout);

}  // namespace optosqueeze

#endif  // OPTOSQUEEZE_QUADRATURE_HPP
