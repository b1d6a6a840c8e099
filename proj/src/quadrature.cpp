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

#include "optosqueeze/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <set>

#include "optosqueeze/errors.hpp"

namespace optosqueeze {

namespace {

void require_finite(double value, const char* what) {
  if (!std::isfinite(value)) {
    throw ValidationError(std::string(what) + " must be finite");
  }
}

void require_underdamped(double gamma, double omega) {
  require_finite(gamma, "gamma");
  require_finite(omega, "omega");
  if (gamma < 0.0) throw ValidationError("gamma must be nonnegative");
  if (omega <= 0.0) throw ValidationError("omega must be positive");
  if (gamma >= 2.0 * omega) {
    throw ValidationError("overdamped oscillator (gamma >= 2 omega) is not supported");
  }
}

void require_time(double t) {
  require_finite(t, "t");
  if (t < 0.0) throw ValidationError("evolution time must be nonnegative");
}

Matrix embed_block(const Eigen::Matrix2d& block, std::size_t mode, std::size_t dim,
                   bool identity_elsewhere) {
  Matrix m = identity_elsewhere ? Matrix(Matrix::Identity(dim, dim)) : Matrix(Matrix::Zero(dim, dim));
  m.block<2, 2>(2 * mode, 2 * mode) = block;
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// ModeLayout

ModeLayout::ModeLayout(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw ValidationError("mode layout needs at least one mode");
  std::set<std::string> seen;
  for (const auto& label : labels_) {
    if (label.empty()) throw ValidationError("mode labels must be nonempty");
    if (!seen.insert(label).second) {
      throw ValidationError("duplicate mode label '" + label + "'");
    }
  }
}

ModeLayout ModeLayout::mech_opt() { return ModeLayout({"mech", "opt"}); }
ModeLayout ModeLayout::mech() { return ModeLayout({"mech"}); }

std::size_t ModeLayout::index_of(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) {
    throw ValidationError("unknown mode label '" + std::string(label) + "'");
  }
  return static_cast<std::size_t>(it - labels_.begin());
}

bool ModeLayout::contains(std::string_view label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

// ---------------------------------------------------------------------------
// LinearMap / NoiseTerm / GaussianChannel

LinearMap::LinearMap(Matrix matrix, ModeLayout layout)
    : matrix_(std::move(matrix)), layout_(std::move(layout)) {
  const auto dim = static_cast<Eigen::Index>(layout_.dimension());
  if (matrix_.rows() != dim || matrix_.cols() != dim) {
    throw ValidationError("linear map size does not match mode layout");
  }
  if (!matrix_.allFinite()) throw ValidationError("linear map has non-finite entries");
}

LinearMap LinearMap::identity(const ModeLayout& layout) {
  const auto dim = static_cast<Eigen::Index>(layout.dimension());
  return LinearMap(Matrix::Identity(dim, dim), layout);
}

Eigen::Matrix2d LinearMap::block(std::string_view to, std::string_view from) const {
  return matrix_.block<2, 2>(static_cast<Eigen::Index>(layout_.x_index(to)),
                             static_cast<Eigen::Index>(layout_.x_index(from)));
}

LinearMap operator*(const LinearMap& later, const LinearMap& earlier) {
  if (!(later.layout() == earlier.layout())) {
    throw ValidationError("cannot multiply maps with different layouts");
  }
  return LinearMap(later.matrix() * earlier.matrix(), later.layout());
}

NoiseTerm::NoiseTerm(Vector mean, Matrix covariance)
    : mean_(std::move(mean)), covariance_(std::move(covariance)) {
  if (covariance_.rows() != covariance_.cols() || covariance_.rows() != mean_.size()) {
    throw ValidationError("noise mean and covariance sizes disagree");
  }
  if (!mean_.allFinite() || !covariance_.allFinite()) {
    throw ValidationError("noise term has non-finite entries");
  }
  const double scale = covariance_.cwiseAbs().maxCoeff();
  if ((covariance_ - covariance_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1.0)) {
    throw ValidationError("noise covariance must be symmetric");
  }
  covariance_ = 0.5 * (covariance_ + covariance_.transpose()).eval();
  if (covariance_.size() > 0 && scale > 0.0) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(covariance_, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-10 * covariance_.norm()) {
      throw ValidationError("noise covariance must be positive semidefinite");
    }
  }
}

NoiseTerm NoiseTerm::zero(const ModeLayout& layout) {
  const auto dim = static_cast<Eigen::Index>(layout.dimension());
  return NoiseTerm(Vector::Zero(dim), Matrix::Zero(dim, dim));
}

GaussianChannel::GaussianChannel(LinearMap map, NoiseTerm noise)
    : map_(std::move(map)), noise_(std::move(noise)) {
  if (noise_.mean().size() != static_cast<Eigen::Index>(map_.layout().dimension())) {
    throw ValidationError("noise dimension does not match map layout");
  }
}

GaussianChannel::GaussianChannel(LinearMap map)
    : map_(std::move(map)), noise_(NoiseTerm::zero(map_.layout())) {}

GaussianChannel GaussianChannel::identity(const ModeLayout& layout) {
  return GaussianChannel(LinearMap::identity(layout));
}

// ---------------------------------------------------------------------------
// Diagnostics

Matrix symplectic_form(std::size_t mode_count) {
  const auto dim = static_cast<Eigen::Index>(2 * mode_count);
  Matrix omega = Matrix::Zero(dim, dim);
  for (Eigen::Index m = 0; m < dim; m += 2) {
    omega(m, m + 1) = 1.0;
    omega(m + 1, m) = -1.0;
  }
  return omega;
}

double symplectic_defect(const LinearMap& map) {
  const Matrix omega = symplectic_form(map.layout().mode_count());
  const Matrix& m = map.matrix();
  return (m * omega * m.transpose() - omega).cwiseAbs().maxCoeff();
}

double uncertainty_margin(const Matrix& covariance) {
  const auto modes = static_cast<std::size_t>(covariance.rows() / 2);
  const Eigen::MatrixXcd h = covariance.cast<std::complex<double>>() +
                             std::complex<double>(0.0, 1.0) *
                                 symplectic_form(modes).cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

double physicality_margin(const GaussianChannel& channel) {
  const auto dim = static_cast<Eigen::Index>(channel.layout().dimension());
  const Matrix& m = channel.map().matrix();
  const Matrix& n = channel.noise().covariance();
  auto output_margin = [&](const Matrix& input) {
    return uncertainty_margin(m * input * m.transpose() + n);
  };
  double margin = output_margin(Matrix::Identity(dim, dim));
  const double vsq = 0.01;  // 20 dB
  for (int k = 0; k < 8; ++k) {
    const double angle = k * std::numbers::pi / 8.0;
    const Eigen::Vector2d u(std::cos(angle), std::sin(angle));
    const Eigen::Vector2d w(-std::sin(angle), std::cos(angle));
    const Eigen::Matrix2d single = vsq * u * u.transpose() + (1.0 / vsq) * w * w.transpose();
    Matrix input = Matrix::Zero(dim, dim);
    for (Eigen::Index j = 0; j < dim; j += 2) input.block<2, 2>(j, j) = single;
    margin = std::min(margin, output_margin(input));
  }
  return margin;
}

// ---------------------------------------------------------------------------
// Primitive interactions

LinearMap qnd_xx(double chi, std::string_view mode_a, std::string_view mode_b,
                 const ModeLayout& layout) {
  require_finite(chi, "chi");
  const std::size_t a = layout.index_of(mode_a);
  const std::size_t b = layout.index_of(mode_b);
  if (a == b) throw ValidationError("QND interaction needs two distinct modes");
  LinearMap id = LinearMap::identity(layout);
  Matrix m = id.matrix();
  m(2 * b + 1, 2 * a) += chi;
  m(2 * a + 1, 2 * b) += chi;
  return LinearMap(std::move(m), layout);
}

LinearMap qnd_pp(double chi, std::string_view mode_a, std::string_view mode_b,
                 const ModeLayout& layout) {
  require_finite(chi, "chi");
  const std::size_t a = layout.index_of(mode_a);
  const std::size_t b = layout.index_of(mode_b);
  if (a == b) throw ValidationError("QND interaction needs two distinct modes");
  LinearMap id = LinearMap::identity(layout);
  Matrix m = id.matrix();
  m(2 * b, 2 * a + 1) += chi;
  m(2 * a, 2 * b + 1) += chi;
  return LinearMap(std::move(m), layout);
}

LinearMap rotation(std::string_view mode, double angle, const ModeLayout& layout) {
  require_finite(angle, "rotation angle");
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Eigen::Matrix2d block;
  block << c, s, -s, c;
  return LinearMap(embed_block(block, layout.index_of(mode), layout.dimension(), true), layout);
}

double sigma_factor(double gamma, double omega) {
  require_finite(gamma, "gamma");
  require_finite(omega, "omega");
  if (gamma < 0.0) throw ValidationError("gamma must be nonnegative");
  if (omega <= 0.0) throw ValidationError("omega must be positive");
  if (gamma > 2.0 * omega) {
    throw ValidationError("overdamped oscillator (gamma > 2 omega) has no sigma factor");
  }
  const double r = gamma / (2.0 * omega);
  return std::sqrt((1.0 - r) * (1.0 + r));
}

Eigen::Matrix2d lossy_rotation_block(double gamma, double omega, double t) {
  require_underdamped(gamma, omega);
  require_time(t);
  const double sigma = sigma_factor(gamma, omega);
  const double phase = sigma * omega * t;
  const double decay = std::exp(-0.5 * gamma * t);
  const double c = std::cos(phase);
  const double s = std::sin(phase);
  const double skew = gamma / (2.0 * sigma * omega);
  Eigen::Matrix2d r;
  r << decay * (c + skew * s), decay * s / sigma,
      -decay * s / sigma, decay * (c - skew * s);
  return r;
}

LinearMap lossy_rotation(double gamma, double omega, double t, std::string_view mode,
                         const ModeLayout& layout) {
  return LinearMap(embed_block(lossy_rotation_block(gamma, omega, t), layout.index_of(mode),
                               layout.dimension(), true),
                   layout);
}

Eigen::Matrix2d thermal_noise_block(double gamma, double omega, double nbar, double t) {
  require_underdamped(gamma, omega);
  require_time(t);
  require_finite(nbar, "nbar");
  if (nbar < 0.0) throw ValidationError("bath occupancy must be nonnegative");
  const double occupancy = 2.0 * nbar + 1.0;
  const double sigma = sigma_factor(gamma, omega);
  const double a = sigma * omega;
  const double decay = std::exp(-gamma * t);
  const double relaxed = -std::expm1(-gamma * t);  // 1 - e^{-gamma t}
  const double s = std::sin(a * t);
  const double s2 = std::sin(2.0 * a * t);
  // Closed form of the integrated thermal force, regrouped so that the O(1)
  // terms cancel analytically instead of in floating point:
  //   V11 = N [1 + e^{-gt}/sigma^2 ((g^2 cos 2at - 2 g a sin 2at) / 4w^2 - 1)]
  //   V22 = N [1 + e^{-gt}/sigma^2 ((g^2 cos 2at + 2 g a sin 2at) / 4w^2 - 1)]
  //   V12 = N g e^{-gt} sin^2(at) / (sigma^2 w)
  const double v11 =
      relaxed - decay * gamma / (2.0 * a * a) * (a * s2 + gamma * s * s);
  const double v22 =
      relaxed + decay * gamma / (2.0 * a * a) * (a * s2 - gamma * s * s);
  const double v12 = gamma * decay * s * s / (sigma * sigma * omega);
  Eigen::Matrix2d v;
  v << v11, v12, v12, v22;
  return occupancy * v;
}

NoiseTerm thermal_noise_cov(double gamma, double omega, double nbar, double t,
                            std::string_view mode, const ModeLayout& layout) {
  const Eigen::Matrix2d block = thermal_noise_block(gamma, omega, nbar, t);
  const auto dim = static_cast<Eigen::Index>(layout.dimension());
  return NoiseTerm(Vector::Zero(dim),
                   embed_block(block, layout.index_of(mode), layout.dimension(), false));
}

GaussianChannel damped_evolution(double gamma, double omega, double nbar, double t,
                                 std::string_view mode, const ModeLayout& layout) {
  return GaussianChannel(lossy_rotation(gamma, omega, t, mode, layout),
                         thermal_noise_cov(gamma, omega, nbar, t, mode, layout));
}

GaussianChannel beamsplitter_loss(double epsilon, double nbar, std::string_view mode,
                                  const ModeLayout& layout) {
  require_finite(epsilon, "epsilon");
  require_finite(nbar, "nbar");
  if (epsilon < 0.0 || epsilon > 1.0) throw ValidationError("epsilon must lie in [0, 1]");
  if (nbar < 0.0) throw ValidationError("optical bath occupancy must be nonnegative");
  const std::size_t m = layout.index_of(mode);
  const Eigen::Matrix2d attenuation = std::sqrt(1.0 - epsilon) * Eigen::Matrix2d::Identity();
  const Eigen::Matrix2d noise = epsilon * (2.0 * nbar + 1.0) * Eigen::Matrix2d::Identity();
  const auto dim = static_cast<Eigen::Index>(layout.dimension());
  return GaussianChannel(
      LinearMap(embed_block(attenuation, m, layout.dimension(), true), layout),
      NoiseTerm(Vector::Zero(dim), embed_block(noise, m, layout.dimension(), false)));
}

GaussianChannel compose(std::span<const GaussianChannel> channels) {
  if (channels.empty()) throw ValidationError("compose needs at least one channel");
  const ModeLayout& layout = channels.front().layout();
  Matrix map = channels.front().map().matrix();
  Vector mean = channels.front().noise().mean();
  Matrix cov = channels.front().noise().covariance();
  for (std::size_t i = 1; i < channels.size(); ++i) {
    const GaussianChannel& next = channels[i];
    if (!(next.layout() == layout)) throw ValidationError("compose: layout mismatch");
    const Matrix& m = next.map().matrix();
    map = m * map;
    mean = m * mean + next.noise().mean();
    cov = m * cov * m.transpose() + next.noise().covariance();
  }
  cov = 0.5 * (cov + cov.transpose()).eval();
  return GaussianChannel(LinearMap(std::move(map), layout),
                         NoiseTerm(std::move(mean), std::move(cov)));
}

GaussianChannel compose(std::initializer_list<GaussianChannel> channels) {
  return compose(std::span<const GaussianChannel>(channels.begin(), channels.size()));
}

LinearMap qnd_xx_collective(std::span<const ModeCoupling> couplings, double chi_total,
                            std::string_view optical_mode, const ModeLayout& layout) {
  require_finite(chi_total, "chi_total");
  if (couplings.empty()) throw ValidationError("collective QND needs a mechanical mode");
  double total = 0.0;
  for (const auto& c : couplings) {
    require_finite(c.coupling, "coupling");
    if (c.coupling < 0.0) throw ValidationError("couplings must be nonnegative");
    total += c.coupling;
  }
  if (total <= 0.0) throw ValidationError("at least one coupling must be positive");
  const std::size_t opt = layout.index_of(optical_mode);
  Matrix m = LinearMap::identity(layout).matrix();
  std::set<std::size_t> seen;
  for (const auto& c : couplings) {
    const std::size_t j = layout.index_of(c.mode);
    if (j == opt) throw ValidationError("optical mode cannot also be mechanical");
    if (!seen.insert(j).second) throw ValidationError("mechanical mode listed twice");
    const double share = chi_total * c.coupling / total;
    m(2 * opt + 1, 2 * j) += share;
    m(2 * j + 1, 2 * opt) += share;
  }
  return LinearMap(std::move(m), layout);
}

}  // namespace optosqueeze
