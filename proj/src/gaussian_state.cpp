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

#include "optosqueeze/gaussian_state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "optosqueeze/errors.hpp"

namespace optosqueeze {

namespace {

constexpr double kUncertaintyTolerance = 1e-9;

void require_positive(double value, const char* what) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw ValidationError(std::string(what) + " must be positive and finite");
  }
}

Eigen::Matrix2d single_mode_cov(const GaussianState& state, const char* which) {
  if (state.layout().mode_count() != 1) {
    throw ValidationError(std::string(which) + ": fidelity needs single-mode states");
  }
  return state.cov();
}

}  // namespace

GaussianState::GaussianState(Vector mean, Matrix cov, ModeLayout layout)
    : mean_(std::move(mean)), cov_(std::move(cov)), layout_(std::move(layout)) {
  const auto dim = static_cast<Eigen::Index>(layout_.dimension());
  if (mean_.size() != dim || cov_.rows() != dim || cov_.cols() != dim) {
    throw ValidationError("state dimensions do not match its layout");
  }
  if (!mean_.allFinite() || !cov_.allFinite()) {
    throw ValidationError("state has non-finite entries");
  }
  const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
  if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw ValidationError("covariance must be symmetric");
  }
  cov_ = 0.5 * (cov_ + cov_.transpose()).eval();
  if (uncertainty_margin(cov_) < -kUncertaintyTolerance * scale) {
    throw ValidationError("covariance violates the uncertainty principle");
  }
}

GaussianState GaussianState::vacuum(const ModeLayout& layout) {
  const auto dim = static_cast<Eigen::Index>(layout.dimension());
  return GaussianState(Vector::Zero(dim), Matrix::Identity(dim, dim), layout);
}

GaussianState GaussianState::thermal(const ModeLayout& layout, double nbar) {
  if (!std::isfinite(nbar) || nbar < 0.0) {
    throw ValidationError("thermal occupancy must be nonnegative");
  }
  const auto dim = static_cast<Eigen::Index>(layout.dimension());
  return GaussianState(Vector::Zero(dim), (2.0 * nbar + 1.0) * Matrix::Identity(dim, dim),
                       layout);
}

Eigen::Matrix2d squeezed_covariance(double vsq, double angle) {
  require_positive(vsq, "squeezed variance");
  if (!std::isfinite(angle)) throw ValidationError("squeezing angle must be finite");
  const Eigen::Vector2d u(std::cos(angle), std::sin(angle));
  const Eigen::Vector2d w(-std::sin(angle), std::cos(angle));
  return vsq * u * u.transpose() + (1.0 / vsq) * w * w.transpose();
}

GaussianState GaussianState::squeezed(double vsq, double angle, std::string label) {
  return GaussianState(Vector::Zero(2), squeezed_covariance(vsq, angle),
                       ModeLayout({std::move(label)}));
}

GaussianState GaussianState::coherent(const Eigen::Vector2d& mean, std::string label) {
  return GaussianState(mean, Matrix::Identity(2, 2), ModeLayout({std::move(label)}));
}

GaussianState tensor(const GaussianState& a, const GaussianState& b) {
  std::vector<std::string> labels = a.layout().labels();
  labels.insert(labels.end(), b.layout().labels().begin(), b.layout().labels().end());
  const Eigen::Index na = a.mean().size();
  const Eigen::Index nb = b.mean().size();
  Vector mean(na + nb);
  mean << a.mean(), b.mean();
  Matrix cov = Matrix::Zero(na + nb, na + nb);
  cov.topLeftCorner(na, na) = a.cov();
  cov.bottomRightCorner(nb, nb) = b.cov();
  return GaussianState(std::move(mean), std::move(cov), ModeLayout(std::move(labels)));
}

GaussianState apply_channel(const GaussianState& state, const GaussianChannel& channel) {
  if (!(state.layout() == channel.layout())) {
    throw ValidationError("apply_channel: state and channel layouts differ");
  }
  const Matrix& m = channel.map().matrix();
  Vector mean = m * state.mean() + channel.noise().mean();
  Matrix cov = m * state.cov() * m.transpose() + channel.noise().covariance();
  return GaussianState(std::move(mean), 0.5 * (cov + cov.transpose()), state.layout());
}

GaussianState marginal(const GaussianState& state, std::span<const std::string> modes) {
  if (modes.empty()) throw ValidationError("marginal needs at least one mode");
  std::vector<Eigen::Index> idx;
  for (const auto& label : modes) {
    const auto m = static_cast<Eigen::Index>(state.layout().index_of(label));
    idx.push_back(2 * m);
    idx.push_back(2 * m + 1);
  }
  const auto n = static_cast<Eigen::Index>(idx.size());
  Vector mean(n);
  Matrix cov(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    mean(i) = state.mean()(idx[i]);
    for (Eigen::Index j = 0; j < n; ++j) cov(i, j) = state.cov()(idx[i], idx[j]);
  }
  return GaussianState(std::move(mean), std::move(cov),
                       ModeLayout(std::vector<std::string>(modes.begin(), modes.end())));
}

GaussianState marginal(const GaussianState& state, std::initializer_list<std::string> modes) {
  return marginal(state, std::span<const std::string>(modes.begin(), modes.size()));
}

double fidelity_zero_mean(const Eigen::Matrix2d& a, const Eigen::Matrix2d& b) {
  // Determinant excess over a pure state; roundoff-sized excess counts as pure
  // because the square root below would amplify it.
  auto mixedness = [](const Eigen::Matrix2d& v) {
    const double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
    const double excess = v.determinant() - 1.0;
    return excess > 64.0 * std::numeric_limits<double>::epsilon() * scale * scale ? excess : 0.0;
  };
  const double excess = mixedness(a) * mixedness(b);
  const double sum_det = (a + b).determinant();
  const double denom = std::sqrt(sum_det + excess) - std::sqrt(excess);
  if (!(denom > 0.0)) throw NumericalError("fidelity denominator is not positive");
  return std::min(1.0, 2.0 / denom);
}

double fidelity_zero_mean(const GaussianState& a, const GaussianState& b) {
  const Eigen::Matrix2d va = single_mode_cov(a, "first state");
  const Eigen::Matrix2d vb = single_mode_cov(b, "second state");
  if (a.mean().cwiseAbs().maxCoeff() > 0.0 || b.mean().cwiseAbs().maxCoeff() > 0.0) {
    throw ValidationError("fidelity_zero_mean requires zero-mean states");
  }
  return fidelity_zero_mean(va, vb);
}

double mean_distance(const GaussianState& a, const GaussianState& b) {
  if (!(a.layout() == b.layout())) throw ValidationError("mean_distance: layouts differ");
  return (a.mean() - b.mean()).norm();
}

double pure_fidelity(double mu, double phi, double v_p, double v_sq) {
  require_positive(mu, "mu");
  require_positive(v_p, "momentum variance");
  require_positive(v_sq, "ancilla variance");
  if (!std::isfinite(phi)) throw ValidationError("phi must be finite");
  const double t = std::tan(phi);
  const double k = mu * std::abs(1.0 - mu);
  return 1.0 / std::sqrt(1.0 + k * v_p * (v_sq + 0.25 * k * v_p * t) * t);
}

double classical_bound(double mu) {
  require_positive(mu, "mu");
  return 1.0 / (1.0 + std::sqrt(0.5 + 0.25 * (mu * mu + 1.0 / (mu * mu))));
}

Eigen::Matrix2d squeeze_target_map(double mu, double phi) {
  require_positive(mu, "mu");
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  Eigen::Matrix2d r;
  r << c, s, -s, c;
  return r * Eigen::Vector2d(1.0 / mu, mu).asDiagonal();
}

}  // namespace optosqueeze
