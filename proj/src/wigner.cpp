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

#include "optosqueeze/wigner.hpp"

#include <fftw3.h>
#include <gsl/gsl_sf_laguerre.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>

#include "optosqueeze/errors.hpp"

namespace optosqueeze {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInvTwoPi = 1.0 / (2.0 * std::numbers::pi);

// FFTW planning is not thread safe.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

template <typename T>
std::unique_ptr<T[], FftwFree> fftw_array(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * n));
  if (p == nullptr) throw NumericalError("FFTW allocation failed");
  return std::unique_ptr<T[], FftwFree>(p);
}

class Plan {
 public:
  explicit Plan(fftw_plan plan) : plan_(plan) {
    if (plan_ == nullptr) throw NumericalError("FFTW planning failed");
  }
  ~Plan() {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan_);
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  void execute() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_;
};

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Signed DFT index for position i of an n-point transform.
long signed_index(std::size_t i, std::size_t n) {
  return i <= n / 2 ? static_cast<long>(i) : static_cast<long>(i) - static_cast<long>(n);
}

Eigen::Matrix2d single_mode_block(const GaussianChannel& channel, Eigen::Vector2d* drift,
                                  Eigen::Matrix2d* noise) {
  if (channel.layout().mode_count() != 1) {
    throw ValidationError("Wigner evolution needs a single-mode channel");
  }
  *drift = channel.noise().mean();
  *noise = channel.noise().covariance();
  return channel.map().matrix();
}

}  // namespace

// ---------------------------------------------------------------------------
// Grid

void GridSpec::validate() const {
  if (!std::isfinite(half_extent) || half_extent <= 0.0) {
    throw ValidationError("grid half_extent must be positive");
  }
  if (resolution < 16 || (resolution & (resolution - 1)) != 0) {
    throw ValidationError("grid resolution must be a power of two >= 16");
  }
}

WignerGrid::WignerGrid(GridSpec spec, std::vector<double> values)
    : spec_(spec), values_(std::move(values)) {
  spec_.validate();
  if (values_.size() != spec_.resolution * spec_.resolution) {
    throw ValidationError("grid value count does not match resolution");
  }
}

WignerGrid WignerGrid::sample(const GridSpec& spec,
                              const std::function<double(double, double)>& w) {
  spec.validate();
  const std::size_t n = spec.resolution;
  std::vector<double> values(n * n);
  for (std::size_t ip = 0; ip < n; ++ip) {
    const double p = spec.coordinate(ip);
    for (std::size_t ix = 0; ix < n; ++ix) values[ip * n + ix] = w(spec.coordinate(ix), p);
  }
  return WignerGrid(spec, std::move(values));
}

double WignerGrid::interpolate(double x, double p) const {
  const std::size_t n = spec_.resolution;
  const double dx = spec_.spacing();
  const double fx = (x + spec_.half_extent) / dx;
  const double fp = (p + spec_.half_extent) / dx;
  if (!(fx >= 0.0 && fp >= 0.0 && fx <= static_cast<double>(n - 1) &&
        fp <= static_cast<double>(n - 1))) {
    return 0.0;
  }
  auto ix = static_cast<std::size_t>(fx);
  auto ip = static_cast<std::size_t>(fp);
  ix = std::min(ix, n - 2);
  ip = std::min(ip, n - 2);
  const double tx = fx - static_cast<double>(ix);
  const double tp = fp - static_cast<double>(ip);
  return (1.0 - tp) * ((1.0 - tx) * at(ix, ip) + tx * at(ix + 1, ip)) +
         tp * ((1.0 - tx) * at(ix, ip + 1) + tx * at(ix + 1, ip + 1));
}

double WignerGrid::origin_value() const {
  const std::size_t c = spec_.resolution / 2;
  return at(c, c);
}

double WignerGrid::integral() const {
  double sum = 0.0;
  for (double v : values_) sum += v;
  return sum * spec_.spacing() * spec_.spacing();
}

GridMoments WignerGrid::moments() const {
  const std::size_t n = spec_.resolution;
  double m0 = 0.0;
  Eigen::Vector2d m1 = Eigen::Vector2d::Zero();
  Eigen::Matrix2d m2 = Eigen::Matrix2d::Zero();
  for (std::size_t ip = 0; ip < n; ++ip) {
    const double p = spec_.coordinate(ip);
    for (std::size_t ix = 0; ix < n; ++ix) {
      const double w = at(ix, ip);
      const double x = spec_.coordinate(ix);
      m0 += w;
      m1 += w * Eigen::Vector2d(x, p);
      m2(0, 0) += w * x * x;
      m2(0, 1) += w * x * p;
      m2(1, 1) += w * p * p;
    }
  }
  if (!(std::abs(m0) > 0.0)) throw NumericalError("grid has zero total mass");
  m2(1, 0) = m2(0, 1);
  GridMoments out;
  out.mean = m1 / m0;
  out.cov = m2 / m0 - out.mean * out.mean.transpose();
  return out;
}

// ---------------------------------------------------------------------------
// Constructors

WignerGrid wigner_fock(int n, const GridSpec& spec) {
  if (n < 0 || n > 3) throw ValidationError("Fock states are supported for n = 0..3");
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  return WignerGrid::sample(spec, [n, sign](double x, double p) {
    const double r2 = x * x + p * p;
    return sign * kInvTwoPi * gsl_sf_laguerre_n(n, 0.0, r2) * std::exp(-0.5 * r2);
  });
}

double cat_wigner_value(const CatSpec& cat, double x, double p) {
  const double a = cat.alpha;
  const double s = cat.parity == CatParity::kOdd ? -1.0 : 1.0;
  const double overlap = std::exp(-2.0 * a * a);
  const double norm = 1.0 / (2.0 * (1.0 + s * overlap));
  const double xp = x - 2.0 * a;
  const double xm = x + 2.0 * a;
  const double p2 = p * p;
  const double lobes = std::exp(-0.5 * (xp * xp + p2)) + std::exp(-0.5 * (xm * xm + p2));
  const double fringe = 2.0 * std::exp(-0.5 * (x * x + p2)) * std::cos(2.0 * a * p);
  return norm * kInvTwoPi * (lobes + s * fringe);
}

WignerGrid wigner_cat(const CatSpec& cat, const GridSpec& spec) {
  spec.validate();
  if (!std::isfinite(cat.alpha) || cat.alpha <= 0.0) {
    throw ValidationError("cat amplitude alpha must be positive");
  }
  if (cat.alpha > spec.half_extent / 4.0) {
    throw ValidationError("cat amplitude too large for the grid (alpha > L/4)");
  }
  return WignerGrid::sample(spec, [&cat](double x, double p) { return cat_wigner_value(cat, x, p); });
}

WignerGrid wigner_gaussian(const GaussianState& state, const GridSpec& spec) {
  if (state.layout().mode_count() != 1) throw ValidationError("wigner_gaussian needs one mode");
  const Eigen::Matrix2d cov = state.cov();
  const Eigen::Matrix2d inv = cov.inverse();
  const Eigen::Vector2d mean = state.mean();
  const double pref = kInvTwoPi / std::sqrt(cov.determinant());
  return WignerGrid::sample(spec, [&](double x, double p) {
    const Eigen::Vector2d u = Eigen::Vector2d(x, p) - mean;
    return pref * std::exp(-0.5 * u.dot(inv * u));
  });
}

// ---------------------------------------------------------------------------
// Evolution

WignerGrid apply_gaussian_channel(const WignerGrid& grid, const GaussianChannel& channel,
                                  ChannelReport* report) {
  Eigen::Vector2d d;
  Eigen::Matrix2d noise;
  const Eigen::Matrix2d s = single_mode_block(channel, &d, &noise);
  const double det = s.determinant();
  if (!(std::abs(det) > 1e-12)) throw NumericalError("channel map is singular");
  const Eigen::Matrix2d s_inv = s.inverse();
  const GridSpec& spec = grid.spec();
  const std::size_t n = spec.resolution;
  const double dx = spec.spacing();
  const double before = grid.integral();

  // Affine step.
  std::vector<double> moved(n * n);
  const double scale = 1.0 / std::abs(det);
  for (std::size_t ip = 0; ip < n; ++ip) {
    for (std::size_t ix = 0; ix < n; ++ix) {
      const Eigen::Vector2d src =
          s_inv * (Eigen::Vector2d(spec.coordinate(ix), spec.coordinate(ip)) - d);
      moved[ip * n + ix] = scale * grid.interpolate(src(0), src(1));
    }
  }
  WignerGrid affine(spec, std::move(moved));
  const double after_affine = affine.integral();
  double clipped = std::abs(before - after_affine);

  const bool has_noise = noise.cwiseAbs().maxCoeff() > 0.0;
  if (!has_noise) {
    ChannelReport r{clipped, std::abs(after_affine - before)};
    if (report != nullptr) *report = r;
    if (r.clipped_mass > kMassTolerance || r.normalization_drift > kMassTolerance) {
      throw NumericalError("Wigner evolution lost mass off the grid");
    }
    return affine;
  }

  // Spectral convolution on a zero-padded square.
  const double sigma = std::sqrt(std::max(noise(0, 0), noise(1, 1)));
  const auto pad = static_cast<std::size_t>(std::ceil(10.0 * sigma / dx));
  const std::size_t m = next_power_of_two(n + 2 * std::min(pad, n));
  const std::size_t offset = (m - n) / 2;
  const std::size_t mh = m / 2 + 1;
  auto real = fftw_array<double>(m * m);
  auto freq = fftw_array<fftw_complex>(m * mh);
  std::unique_ptr<Plan> forward;
  std::unique_ptr<Plan> backward;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    const int mi = static_cast<int>(m);
    forward = std::make_unique<Plan>(
        fftw_plan_dft_r2c_2d(mi, mi, real.get(), freq.get(), FFTW_ESTIMATE));
    backward = std::make_unique<Plan>(
        fftw_plan_dft_c2r_2d(mi, mi, freq.get(), real.get(), FFTW_ESTIMATE));
  }
  std::fill(real.get(), real.get() + m * m, 0.0);
  for (std::size_t ip = 0; ip < n; ++ip) {
    std::copy_n(affine.values().data() + ip * n, n, real.get() + (ip + offset) * m + offset);
  }
  forward->execute();
  const double dk = 2.0 * kPi / (static_cast<double>(m) * dx);
  const double norm = 1.0 / static_cast<double>(m * m);
  for (std::size_t r = 0; r < m; ++r) {
    const double kp = dk * static_cast<double>(signed_index(r, m));
    for (std::size_t c = 0; c < mh; ++c) {
      const double kx = dk * static_cast<double>(c);
      const double q = noise(0, 0) * kx * kx + 2.0 * noise(0, 1) * kx * kp + noise(1, 1) * kp * kp;
      const double g = norm * std::exp(-0.5 * q);
      freq[r * mh + c][0] *= g;
      freq[r * mh + c][1] *= g;
    }
  }
  backward->execute();

  std::vector<double> out(n * n);
  double total = 0.0;
  double inside = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      const double v = real[r * m + c];
      total += v;
      if (r >= offset && r < offset + n && c >= offset && c < offset + n) {
        out[(r - offset) * n + (c - offset)] = v;
        inside += v;
      }
    }
  }
  clipped += std::abs(total - inside) * dx * dx;
  WignerGrid result(spec, std::move(out));
  ChannelReport r{clipped, std::abs(result.integral() - before)};
  if (report != nullptr) *report = r;
  if (r.clipped_mass > kMassTolerance || r.normalization_drift > kMassTolerance) {
    throw NumericalError("Wigner evolution lost mass off the grid");
  }
  return result;
}

SpectralEvaluator::SpectralEvaluator(const WignerGrid& grid) : spec_(grid.spec()) {
  const std::size_t n = spec_.resolution;
  auto data = fftw_array<fftw_complex>(n * n);
  std::unique_ptr<Plan> plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    const int ni = static_cast<int>(n);
    plan = std::make_unique<Plan>(
        fftw_plan_dft_2d(ni, ni, data.get(), data.get(), FFTW_FORWARD, FFTW_ESTIMATE));
  }
  for (std::size_t i = 0; i < n * n; ++i) {
    data[i][0] = grid.values()[i];
    data[i][1] = 0.0;
  }
  plan->execute();
  const double dx = spec_.spacing();
  const double dq = 2.0 * kPi / (static_cast<double>(n) * dx);
  const double L = spec_.half_extent;
  transform_.resize(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    const double qp = dq * static_cast<double>(signed_index(r, n));
    for (std::size_t c = 0; c < n; ++c) {
      const double qx = dq * static_cast<double>(signed_index(c, n));
      const std::complex<double> f(data[r * n + c][0], data[r * n + c][1]);
      transform_[r * n + c] = dx * dx * std::polar(1.0, (qx + qp) * L) * f;
    }
  }
}

double SpectralEvaluator::evaluate(const GaussianChannel& channel, double x, double p) const {
  Eigen::Vector2d d;
  Eigen::Matrix2d noise;
  const Eigen::Matrix2d s = single_mode_block(channel, &d, &noise);
  const double det = s.determinant();
  if (!(std::abs(det) > 1e-12)) throw NumericalError("channel map is singular");
  const Eigen::Matrix2d s_inv = s.inverse();
  const Eigen::Vector2d y = s_inv * (Eigen::Vector2d(x, p) - d);
  const Eigen::Matrix2d c = s_inv * noise * s_inv.transpose();
  const std::size_t n = spec_.resolution;
  const double dq = 2.0 * kPi / (static_cast<double>(n) * spec_.spacing());
  const bool origin = y.cwiseAbs().maxCoeff() == 0.0;
  double sum = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    const double qp = dq * static_cast<double>(signed_index(r, n));
    for (std::size_t col = 0; col < n; ++col) {
      const double qx = dq * static_cast<double>(signed_index(col, n));
      const double e = -0.5 * (c(0, 0) * qx * qx + 2.0 * c(0, 1) * qx * qp + c(1, 1) * qp * qp);
      if (e < -60.0) continue;
      const std::complex<double>& w = transform_[r * n + col];
      if (origin) {
        sum += w.real() * std::exp(e);
      } else {
        sum += (w * std::polar(std::exp(e), qx * y(0) + qp * y(1))).real();
      }
    }
  }
  return sum * dq * dq / (4.0 * kPi * kPi * std::abs(det));
}

double negativity_eta(double w0) {
  return std::clamp(-2.0 * kPi * w0, 0.0, 1.0 + 1e-6);
}

double negativity_eta(const WignerGrid& grid) { return negativity_eta(grid.origin_value()); }

HalfLifeResult half_life(const WignerGrid& initial, const GaussianChannel& prepare,
                         const LossConfig& loss, const HalfLifeOptions& options) {
  loss.validate();
  if (options.samples_per_period < 64) {
    throw ValidationError("half_life needs at least 64 samples per period");
  }
  if (!(options.max_periods > 0.0)) throw ValidationError("max_periods must be positive");
  if (!(prepare.layout() == ModeLayout::mech())) {
    throw ValidationError("half_life expects a single mechanical-mode preparation channel");
  }
  const SpectralEvaluator evaluator(initial);
  const ModeLayout layout = ModeLayout::mech();
  const double period = 2.0 * kPi / loss.omega_m;
  auto eta_at = [&](double t) {
    const GaussianChannel evolve =
        damped_evolution(loss.gamma, loss.omega_m, loss.nbar_m, t, kMechMode, layout);
    return negativity_eta(evaluator.evaluate(compose({prepare, evolve})));
  };

  HalfLifeResult result;
  const double dt = period / options.samples_per_period;
  const auto max_steps =
      static_cast<long>(std::ceil(options.max_periods * options.samples_per_period));
  result.eta0 = eta_at(0.0);
  result.times.push_back(0.0);
  result.eta.push_back(result.eta0);
  if (result.eta0 < options.threshold) {
    result.reached = true;
    return result;
  }
  for (long k = 1; k <= max_steps; ++k) {
    const double t = dt * static_cast<double>(k);
    const double e = eta_at(t);
    result.times.push_back(t);
    result.eta.push_back(e);
    if (e < options.threshold) {
      double lo = t - dt;
      double hi = t;
      for (int it = 0; it < 60 && hi - lo > 1e-12 * period; ++it) {
        const double mid = 0.5 * (lo + hi);
        (eta_at(mid) >= options.threshold ? lo : hi) = mid;
      }
      result.tau = 0.5 * (lo + hi);
      result.tau_periods = result.tau / period;
      result.reached = true;
      return result;
    }
  }
  result.tau = dt * static_cast<double>(max_steps);
  result.tau_periods = result.tau / period;
  return result;
}

HalfLifeResult half_life(const CatSpec& cat, const LossConfig& loss,
                         const std::optional<PulseSchedule>& pre_squeeze,
                         const HalfLifeOptions& options) {
  const WignerGrid initial = wigner_cat(cat, options.grid);
  GaussianChannel prepare = GaussianChannel::identity(ModeLayout::mech());
  if (pre_squeeze.has_value()) {
    prepare = mechanical_reduced_channel(build_lossy(*pre_squeeze, loss),
                                         ancilla_state(*pre_squeeze));
  }
  return half_life(initial, prepare, loss, options);
}

std::vector<double> negativity_trace(const WignerGrid& initial, const GaussianChannel& prepare,
                                     const LossConfig& loss, const std::vector<double>& times) {
  loss.validate();
  const SpectralEvaluator evaluator(initial);
  const ModeLayout layout = ModeLayout::mech();
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) {
    if (!(t >= 0.0)) throw ValidationError("trace times must be nonnegative");
    const GaussianChannel evolve =
        damped_evolution(loss.gamma, loss.omega_m, loss.nbar_m, t, kMechMode, layout);
    out.push_back(negativity_eta(evaluator.evaluate(compose({prepare, evolve}))));
  }
  return out;
}

EllipseRadii fringe_ellipse(double alpha, double mu) {
  if (!std::isfinite(alpha) || alpha <= 0.0) throw ValidationError("alpha must be positive");
  if (!std::isfinite(mu) || mu <= 0.0) throw ValidationError("mu must be positive");
  const double a2 = alpha * alpha;
  const double cx = 4.0 * a2 / std::expm1(2.0 * a2) + 1.0;
  const double cp = 4.0 * a2 / -std::expm1(-2.0 * a2) + 1.0;
  return {std::sqrt(2.0 / (mu * mu * cx)), std::sqrt(2.0 * mu * mu / cp)};
}

double mu_opt(double alpha) {
  if (!std::isfinite(alpha) || alpha <= 0.0) throw ValidationError("alpha must be positive");
  const double a2 = alpha * alpha;
  const double cx = 4.0 * a2 / std::expm1(2.0 * a2) + 1.0;
  const double cp = 4.0 * a2 / -std::expm1(-2.0 * a2) + 1.0;
  return std::pow(cp / cx, 0.25);
}

// ---------------------------------------------------------------------------
// Export

void write_grid_csv(std::ostream& out, const WignerGrid& grid) {
  const auto old = out.precision(17);
  const std::size_t n = grid.spec().resolution;
  out << "half_extent," << grid.spec().half_extent << "\n";
  out << "resolution," << n << "\n";
  for (std::size_t ip = 0; ip < n; ++ip) {
    for (std::size_t ix = 0; ix < n; ++ix) {
      if (ix != 0) out << ',';
      out << grid.at(ix, ip);
    }
    out << '\n';
  }
  out.precision(old);
}

WignerGrid read_grid_csv(std::istream& in) {
  auto header = [&in](const char* key) {
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("grid CSV: missing header");
    const std::string prefix = std::string(key) + ",";
    if (line.rfind(prefix, 0) != 0) throw ValidationError(std::string("grid CSV: expected ") + key);
    return line.substr(prefix.size());
  };
  GridSpec spec;
  spec.half_extent = std::stod(header("half_extent"));
  spec.resolution = std::stoul(header("resolution"));
  spec.validate();
  std::vector<double> values;
  values.reserve(spec.resolution * spec.resolution);
  std::string line;
  while (std::getline(in, line)) {
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) values.push_back(std::stod(cell));
  }
  return WignerGrid(spec, std::move(values));
}

namespace {
constexpr char kMagic[8] = {'O', 'S', 'Q', 'W', 'G', 'R', 'D', '1'};
}  // namespace

void write_grid_binary(std::ostream& out, const WignerGrid& grid) {
  out.write(kMagic, sizeof(kMagic));
  const double L = grid.spec().half_extent;
  const auto n = static_cast<std::uint64_t>(grid.spec().resolution);
  out.write(reinterpret_cast<const char*>(&L), sizeof(L));
  out.write(reinterpret_cast<const char*>(&n), sizeof(n));
  out.write(reinterpret_cast<const char*>(grid.values().data()),
            static_cast<std::streamsize>(grid.values().size() * sizeof(double)));
}

WignerGrid read_grid_binary(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw ValidationError("binary grid: bad magic");
  }
  GridSpec spec;
  std::uint64_t n = 0;
  in.read(reinterpret_cast<char*>(&spec.half_extent), sizeof(double));
  in.read(reinterpret_cast<char*>(&n), sizeof(n));
  spec.resolution = static_cast<std::size_t>(n);
  spec.validate();
  std::vector<double> values(spec.resolution * spec.resolution);
  in.read(reinterpret_cast<char*>(values.data()),
          static_cast<std::streamsize>(values.size() * sizeof(double)));
  if (!in) throw ValidationError("binary grid: truncated data");
  return WignerGrid(spec, std::move(values));
}

}  // namespace optosqueeze
