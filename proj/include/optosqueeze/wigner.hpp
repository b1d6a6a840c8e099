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

// Grid-sampled single-mode Wigner functions (hbar = 2, so the vacuum is a unit
// Gaussian and 2 pi W(0) is the mean parity).

#ifndef OPTOSQUEEZE_WIGNER_HPP
#define OPTOSQUEEZE_WIGNER_HPP

#include <complex>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "optosqueeze/gaussian_state.hpp"
#include "optosqueeze/quadrature.hpp"
#include "optosqueeze/squeezer.hpp"

namespace optosqueeze {

/// Square grid on [-L, L)^2 with x_i = -L + i dx, dx = 2L / resolution. The
/// origin is the node (resolution / 2, resolution / 2).
struct GridSpec {
  double half_extent = 8.0;
  std::size_t resolution = 512;

  /// Resolution must be a power of two >= 16 and the extent positive.
  void validate() const;
  double spacing() const { return 2.0 * half_extent / static_cast<double>(resolution); }
  double coordinate(std::size_t i) const {
    return -half_extent + static_cast<double>(i) * spacing();
  }
  bool operator==(const GridSpec&) const = default;
};

struct GridMoments {
  Eigen::Vector2d mean;
  Eigen::Matrix2d cov;
};

class WignerGrid {
 public:
  /// `values` is row-major with the momentum index outermost: values[ip * res + ix].
  WignerGrid(GridSpec spec, std::vector<double> values);

  static WignerGrid sample(const GridSpec& spec, const std::function<double(double, double)>& w);

  const GridSpec& spec() const { return spec_; }
  const std::vector<double>& values() const { return values_; }
  double at(std::size_t ix, std::size_t ip) const { return values_[ip * spec_.resolution + ix]; }

  /// Bilinear interpolation; zero outside the grid.
  double interpolate(double x, double p) const;
  double origin_value() const;
  /// Riemann sum of W dx dp.
  double integral() const;
  /// First and second moments from the grid (normalized by the integral).
  GridMoments moments() const;

 private:
  GridSpec spec_;
  std::vector<double> values_;
};

// ---------------------------------------------------------------------------
// Constructors

/// Fock state |n>, n <= 3: W = (-1)^n L_n(r^2) exp(-r^2 / 2) / (2 pi).
WignerGrid wigner_fock(int n, const GridSpec& spec = {});

enum class CatParity { kEven, kOdd };

/// |alpha> +/- |-alpha> with real alpha; coherent peaks at X = +/-2 alpha.
struct CatSpec {
  double alpha = 2.0;
  CatParity parity = CatParity::kOdd;
};

/// Closed-form cat Wigner function. Requires alpha <= L / 4.
double cat_wigner_value(const CatSpec& cat, double x, double p);
WignerGrid wigner_cat(const CatSpec& cat, const GridSpec& spec = {});

/// Single-mode Gaussian state sampled on the grid.
WignerGrid wigner_gaussian(const GaussianState& state, const GridSpec& spec = {});

// ---------------------------------------------------------------------------
// Evolution

struct ChannelReport {
  /// Probability mass pushed outside the window by the map and the kernel.
  double clipped_mass = 0.0;
  /// |integral after - integral before|.
  double normalization_drift = 0.0;
};

/// Tolerance on clipped mass and drift above which evolution throws.
inline constexpr double kMassTolerance = 1e-3;

/// W'(v) = |det S|^-1 W(S^-1 (v - d)) convolved with the Gaussian of
/// covariance N. The convolution is spectral (exact for singular N); the
/// affine step is a bilinear resample. Throws NumericalError when the map is
/// singular or mass/drift exceed kMassTolerance.
WignerGrid apply_gaussian_channel(const WignerGrid& grid, const GaussianChannel& channel,
                                  ChannelReport* report = nullptr);

/// Exact evaluation of W' = channel(W) at single phase-space points through
/// the Fourier transform of the initial grid; avoids resampling error.
class SpectralEvaluator {
 public:
  explicit SpectralEvaluator(const WignerGrid& grid);

  double evaluate(const GaussianChannel& channel, double x = 0.0, double p = 0.0) const;

 private:
  GridSpec spec_;
  std::vector<std::complex<double>> transform_;  // W-hat(q) on the DFT lattice
};

/// eta = max(-2 pi W(0), 0), clamped to at most 1 + 1e-6.
double negativity_eta(double w0);
double negativity_eta(const WignerGrid& grid);

struct HalfLifeOptions {
  int samples_per_period = 64;
  double max_periods = 40.0;
  double threshold = 0.5;
  GridSpec grid;
};

struct HalfLifeResult {
  double tau = 0.0;          // same time units as 1 / omega_m
  double tau_periods = 0.0;  // omega_m tau / 2 pi
  bool reached = false;      // false: tau is the horizon
  double eta0 = 0.0;
  std::vector<double> times;
  std::vector<double> eta;
};

/// Negativity half-life of a cat under damped evolution. With a pre-squeeze
/// schedule, build_lossy(schedule, loss) acts first (ancilla traced out).
/// eta(t) is sampled from t = 0 with one exact channel per sample and the
/// crossing refined by bisection.
HalfLifeResult half_life(const CatSpec& cat, const LossConfig& loss,
                         const std::optional<PulseSchedule>& pre_squeeze,
                         const HalfLifeOptions& options = {});

/// Same, for an arbitrary initial grid and initial one-mode channel.
HalfLifeResult half_life(const WignerGrid& initial, const GaussianChannel& prepare,
                         const LossConfig& loss, const HalfLifeOptions& options = {});

/// eta at the given times for `prepare` followed by damped evolution.
std::vector<double> negativity_trace(const WignerGrid& initial, const GaussianChannel& prepare,
                                     const LossConfig& loss, const std::vector<double>& times);

struct EllipseRadii {
  double x = 0.0;
  double p = 0.0;
};

/// Central-fringe ellipse of an odd cat squeezed by mu.
EllipseRadii fringe_ellipse(double alpha, double mu);

/// Squeeze factor that makes the central fringe circular.
double mu_opt(double alpha);

// ---------------------------------------------------------------------------
// Export

/// CSV: "half_extent,<L>" and "resolution,<n>" lines, then one row per p index.
void write_grid_csv(std::ostream& out, const WignerGrid& grid);
WignerGrid read_grid_csv(std::istream& in);

/// Binary: magic "OSQWGRD1", double L, uint64 resolution, doubles (native endian).
void write_grid_binary(std::ostream& out, const WignerGrid& grid);
WignerGrid read_grid_binary(std::istream& in);

}  // namespace optosqueeze

#endif  // OPTOSQUEEZE_WIGNER_HPP
