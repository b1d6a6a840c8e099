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

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "optosqueeze/errors.hpp"

using namespace optosqueeze;

namespace {

constexpr double kPi = std::numbers::pi;
const ModeLayout kOne = ModeLayout::mech();

GaussianChannel channel(const Eigen::Matrix2d& s, const Eigen::Matrix2d& n,
                        const Eigen::Vector2d& d = Eigen::Vector2d::Zero()) {
  return GaussianChannel(LinearMap(s, kOne), NoiseTerm(d, n));
}

Eigen::Matrix2d squeeze(double mu) { return Eigen::Vector2d(1.0 / mu, mu).asDiagonal(); }

// \int exp(-y^T A y / 2 + b^T y) dy over the plane, complex b.
std::complex<double> gaussian_integral(const Eigen::Matrix2d& a, const Eigen::Vector2cd& b) {
  const Eigen::Matrix2cd inv = a.inverse().cast<std::complex<double>>();
  const std::complex<double> q = (b.transpose() * inv * b)(0, 0);
  return 2.0 * kPi / std::sqrt(a.determinant()) * std::exp(0.5 * q);
}

// W'(0) for zero drift: \int W(y) G_N(S y) dy with N invertible.
double cat_origin_after(const CatSpec& cat, const Eigen::Matrix2d& s, const Eigen::Matrix2d& n) {
  const Eigen::Matrix2d a = Eigen::Matrix2d::Identity() + s.transpose() * n.inverse() * s;
  const double g = 1.0 / (2.0 * kPi * std::sqrt(n.determinant()));
  const double al = cat.alpha;
  const double sign = cat.parity == CatParity::kOdd ? -1.0 : 1.0;
  const double norm = 1.0 / (2.0 * (1.0 + sign * std::exp(-2.0 * al * al))) / (2.0 * kPi);
  using C = std::complex<double>;
  const double lobe_weight = std::exp(-2.0 * al * al);
  const C lobes = lobe_weight * (gaussian_integral(a, Eigen::Vector2cd(C(2 * al), 0.0)) +
                                 gaussian_integral(a, Eigen::Vector2cd(C(-2 * al), 0.0)));
  const C fringe = 2.0 * gaussian_integral(a, Eigen::Vector2cd(0.0, C(0.0, 2 * al)));
  return g * norm * (lobes.real() + sign * fringe.real());
}

double fock1_origin_after(const Eigen::Matrix2d& s, const Eigen::Matrix2d& n) {
  const Eigen::Matrix2d a = Eigen::Matrix2d::Identity() + s.transpose() * n.inverse() * s;
  const double g = 1.0 / (2.0 * kPi * std::sqrt(n.determinant()));
  return g / (2.0 * kPi) * 2.0 * kPi * (a.inverse().trace() - 1.0) / std::sqrt(a.determinant());
}

double max_abs_diff(const WignerGrid& a, const WignerGrid& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  }
  return m;
}

}  // namespace

TEST_SUITE("wigner") {

TEST_CASE("grid spec validation") {
  CHECK_NOTHROW(GridSpec{}.validate());
  CHECK_THROWS_AS((GridSpec{8.0, 100}.validate()), ValidationError);
  CHECK_THROWS_AS((GridSpec{8.0, 8}.validate()), ValidationError);
  CHECK_THROWS_AS((GridSpec{-1.0, 64}.validate()), ValidationError);
  const GridSpec g;
  CHECK(g.coordinate(g.resolution / 2) == 0.0);
}

TEST_CASE("constructors are normalized and obey the parity identity") {
  for (int n = 0; n <= 3; ++n) {
    const WignerGrid w = wigner_fock(n);
    CHECK(w.integral() == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(2 * kPi * w.origin_value() == doctest::Approx(n % 2 == 0 ? 1.0 : -1.0).epsilon(1e-3));
  }
  for (const double alpha : {0.5, 1.0, 2.0}) {
    const WignerGrid odd = wigner_cat({alpha, CatParity::kOdd});
    const WignerGrid even = wigner_cat({alpha, CatParity::kEven});
    CHECK(odd.integral() == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(even.integral() == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(2 * kPi * odd.origin_value() == doctest::Approx(-1.0).epsilon(1e-3));
    CHECK(2 * kPi * even.origin_value() == doctest::Approx(1.0).epsilon(1e-3));
  }
  const WignerGrid vac = wigner_gaussian(GaussianState::vacuum(kOne));
  CHECK(vac.integral() == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(2 * kPi * vac.origin_value() == doctest::Approx(1.0).epsilon(1e-3));
  CHECK_THROWS_AS(wigner_fock(4), ValidationError);
  CHECK_THROWS_AS(wigner_cat({2.5, CatParity::kOdd}), ValidationError);
}

TEST_CASE("negativity depth") {
  CHECK(negativity_eta(wigner_cat({2.0, CatParity::kOdd})) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(negativity_eta(wigner_cat({2.0, CatParity::kEven})) == 0.0);
  CHECK(negativity_eta(wigner_fock(0)) == 0.0);
  CHECK(negativity_eta(wigner_fock(1)) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(negativity_eta(-10.0) <= 1.0 + 1e-6);
}

TEST_CASE("cat fringes along momentum") {
  const CatSpec cat{2.0, CatParity::kOdd};
  // Zeros of cos(2 alpha p) are pi / (2 alpha) apart.
  auto root_near = [&](double guess) {
    double lo = guess - 0.2, hi = guess + 0.2;
    for (int i = 0; i < 80; ++i) {
      const double mid = 0.5 * (lo + hi);
      (cat_wigner_value(cat, 0, lo) * cat_wigner_value(cat, 0, mid) <= 0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
  };
  const double spacing = kPi / (2 * cat.alpha);
  const double z1 = root_near(0.5 * spacing);
  const double z2 = root_near(1.5 * spacing);
  CHECK(z2 - z1 == doctest::Approx(spacing).epsilon(1e-3));
  CHECK(cat_wigner_value(cat, 0, kPi / cat.alpha) < 0.0);
  CHECK(cat_wigner_value(cat, 0, kPi / (2 * cat.alpha)) > 0.0);
  // Coherent peaks at X = +/- 2 alpha.
  const double peak = cat_wigner_value(cat, 4.0, 0.0);
  CHECK(peak > cat_wigner_value(cat, 3.9, 0.0));
  CHECK(peak > cat_wigner_value(cat, 4.1, 0.0));
}

TEST_CASE("identity channel leaves the grid unchanged") {
  const WignerGrid w = wigner_cat({2.0, CatParity::kOdd});
  ChannelReport report;
  const WignerGrid out = apply_gaussian_channel(w, GaussianChannel::identity(kOne), &report);
  CHECK(max_abs_diff(w, out) < 1e-6);
  CHECK(report.normalization_drift < 1e-6);
}

TEST_CASE("grid evolution matches covariance calculus") {
  std::mt19937 rng(2026);
  std::uniform_real_distribution<double> angle(0.0, kPi);
  std::uniform_real_distribution<double> mu(0.6, 1.6);
  std::uniform_real_distribution<double> keep(0.5, 1.0);
  std::uniform_real_distribution<double> shift(-1.0, 1.0);
  std::uniform_real_distribution<double> extra(0.0, 0.5);
  for (int trial = 0; trial < 20; ++trial) {
    const GaussianState in = GaussianState::squeezed(mu(rng), angle(rng));
    const double eta = keep(rng);
    const Eigen::Matrix2d s = std::sqrt(eta) * rotation("mech", angle(rng), kOne).matrix() *
                              squeeze(mu(rng));
    const Eigen::Matrix2d n = (1.0 - eta) * Eigen::Matrix2d::Identity() +
                              extra(rng) * squeezed_covariance(0.3, angle(rng));
    const Eigen::Vector2d d(shift(rng), shift(rng));
    const GaussianChannel c = channel(s, n, d);
    const GaussianState expected = apply_channel(in, c);
    const GridMoments got = apply_gaussian_channel(wigner_gaussian(in), c).moments();
    CHECK((got.mean - expected.mean()).cwiseAbs().maxCoeff() < 1e-3);
    CHECK((got.cov - expected.cov()).cwiseAbs().maxCoeff() < 1e-3);
  }
}

TEST_CASE("vacuum is a fixed point of loss") {
  const WignerGrid vac = wigner_fock(0);
  const WignerGrid out = apply_gaussian_channel(vac, beamsplitter_loss(0.5, 0.0, "mech", kOne));
  CHECK(max_abs_diff(vac, out) < 1e-4);
  const GridMoments m = out.moments();
  CHECK((m.cov - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-3);
}

TEST_CASE("negativity is unchanged by rotations and squeezing") {
  const WignerGrid cat = wigner_cat({2.0, CatParity::kOdd});
  for (const double theta : {0.3, 1.1, kPi / 2, 2.9}) {
    const WignerGrid r = apply_gaussian_channel(cat, GaussianChannel(rotation("mech", theta, kOne)));
    CHECK(std::abs(negativity_eta(r) - negativity_eta(cat)) < 1e-6);
  }
  for (const double m : {1.25, 1.5, 2.0}) {
    const WignerGrid sq =
        apply_gaussian_channel(cat, channel(squeeze(m), Eigen::Matrix2d::Zero()));
    CHECK(negativity_eta(sq) == doctest::Approx(1.0).epsilon(1e-4));
  }
}

TEST_CASE("origin value after a channel matches the closed form") {
  const LossConfig loss = LossConfig::from_quality(1e3, 20.0);
  for (const double t : {0.5, 2.0, 6.0}) {
    const GaussianChannel c =
        compose({channel(squeeze(1.8), Eigen::Matrix2d::Zero()),
                 damped_evolution(loss.gamma, 1.0, loss.nbar_m, t, "mech", kOne)});
    const Eigen::Matrix2d s = c.map().matrix();
    const Eigen::Matrix2d n = c.noise().covariance();
    for (const CatParity parity : {CatParity::kOdd, CatParity::kEven}) {
      const CatSpec cat{1.5, parity};
      const WignerGrid grid = wigner_cat(cat);
      const double expected = cat_origin_after(cat, s, n);
      CHECK(SpectralEvaluator(grid).evaluate(c) == doctest::Approx(expected).epsilon(1e-8));
      CHECK(std::abs(apply_gaussian_channel(grid, c).origin_value() - expected) < 1e-3 / (2 * kPi));
    }
    const WignerGrid fock = wigner_fock(1);
    const double expected = fock1_origin_after(s, n);
    CHECK(SpectralEvaluator(fock).evaluate(c) == doctest::Approx(expected).epsilon(1e-8));
    CHECK(std::abs(apply_gaussian_channel(fock, c).origin_value() - expected) < 1e-3 / (2 * kPi));
  }
}

TEST_CASE("spectral evaluation away from the origin") {
  const WignerGrid vac = wigner_fock(0);
  const GaussianChannel c = channel(Eigen::Matrix2d::Identity(), 2.0 * Eigen::Matrix2d::Identity(),
                                    Eigen::Vector2d(0.5, -0.3));
  const double x = 0.9, p = 0.2;
  const double dx = x - 0.5, dp = p + 0.3;
  const double expected = std::exp(-(dx * dx + dp * dp) / 6.0) / (2 * kPi * 3.0);
  CHECK(SpectralEvaluator(vac).evaluate(c, x, p) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("singular maps and clipping are reported") {
  const WignerGrid w = wigner_fock(1, {8.0, 64});
  CHECK_THROWS_AS(apply_gaussian_channel(w, channel(Eigen::Matrix2d::Zero(), Eigen::Matrix2d::Identity())),
                  NumericalError);
  CHECK_THROWS_AS(apply_gaussian_channel(w, channel(squeeze(0.2), Eigen::Matrix2d::Zero())),
                  NumericalError);
  CHECK_THROWS_AS(apply_gaussian_channel(w, channel(Eigen::Matrix2d::Identity(),
                                                    40.0 * Eigen::Matrix2d::Identity())),
                  NumericalError);
}

TEST_CASE("fringe ellipse is the quadratic zero contour") {
  for (const double alpha : {1.0, 2.0}) {
    for (const double mu : {1.0, 1.5, mu_opt(alpha)}) {
      const CatSpec cat{alpha, CatParity::kOdd};
      // Position squeezing by mu: W'(x, p) = W(mu x, p / mu).
      auto f = [&](double x, double p) {
        return cat_wigner_value(cat, mu * x, p / mu) / cat_wigner_value(cat, 0, 0);
      };
      const double h = 1e-4;
      const double fxx = (f(h, 0) - 2 * f(0, 0) + f(-h, 0)) / (h * h);
      const double fpp = (f(0, h) - 2 * f(0, 0) + f(0, -h)) / (h * h);
      const EllipseRadii r = fringe_ellipse(alpha, mu);
      CHECK(r.x == doctest::Approx(std::sqrt(-2.0 / fxx)).epsilon(1e-5));
      CHECK(r.p == doctest::Approx(std::sqrt(-2.0 / fpp)).epsilon(1e-5));
    }
  }
  const EllipseRadii round = fringe_ellipse(2.0, mu_opt(2.0));
  CHECK(std::abs(round.x - round.p) < 1e-9);
  const EllipseRadii raw = fringe_ellipse(2.0, 1.0);
  CHECK(raw.x > raw.p);
}

TEST_CASE("fringe ellipse against the zero crossing") {
  const double alpha = 2.0;
  const double mu = mu_opt(alpha);
  const CatSpec cat{alpha, CatParity::kOdd};
  auto crossing = [&](double ux, double up) {
    double lo = 0.0, hi = 3.0;
    for (int i = 0; i < 80; ++i) {
      const double mid = 0.5 * (lo + hi);
      (cat_wigner_value(cat, mu * mid * ux, mid * up / mu) < 0 ? lo : hi) = mid;
    }
    return lo;
  };
  const EllipseRadii r = fringe_ellipse(alpha, mu);
  CHECK(crossing(0, 1) == doctest::Approx(r.p).epsilon(0.1));
  // Along X the curvature is shallow and the true zero lies well outside the ellipse.
  CHECK(crossing(1, 0) > r.x);
}

TEST_CASE("optimal squeeze factor") {
  CHECK(mu_opt(1.0) == doctest::Approx(1.364).epsilon(1e-3));
  CHECK(mu_opt(2.0) == doctest::Approx(2.028).epsilon(1e-3));
  CHECK(mu_opt(1e-3) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK_THROWS_AS(mu_opt(0.0), ValidationError);
}

TEST_CASE("half-life shrinks in a hotter bath") {
  const CatSpec cat{1.0, CatParity::kOdd};
  HalfLifeOptions opts;
  opts.grid = {8.0, 256};
  const HalfLifeResult cold = half_life(cat, LossConfig::from_quality(1e7, 4e4), std::nullopt, opts);
  const HalfLifeResult hot = half_life(cat, LossConfig::from_quality(1e7, 1.2e5), std::nullopt, opts);
  CHECK(cold.reached);
  CHECK(hot.reached);
  CHECK(hot.tau < cold.tau);
  CHECK(cold.eta0 == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(cold.tau_periods == doctest::Approx(cold.tau / (2 * kPi)));
}

TEST_CASE("cat negativity after five damped periods") {
  const WignerGrid cat = wigner_cat({2.0, CatParity::kOdd});
  const std::vector<double> eta = negativity_trace(cat, GaussianChannel::identity(kOne),
                                                   LossConfig::from_quality(1e7, 4e4),
                                                   {0.0, 5 * 2 * kPi});
  CHECK(eta[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(eta[1] > 0.0);
  CHECK(eta[1] < 1.0);
}

TEST_CASE("grid export round trips") {
  const WignerGrid w = wigner_fock(1, {4.0, 16});
  std::stringstream csv;
  write_grid_csv(csv, w);
  const WignerGrid back = read_grid_csv(csv);
  CHECK(back.spec() == w.spec());
  CHECK(max_abs_diff(back, w) == 0.0);
  std::stringstream bin;
  write_grid_binary(bin, w);
  const WignerGrid back_bin = read_grid_binary(bin);
  CHECK(back_bin.spec() == w.spec());
  CHECK(max_abs_diff(back_bin, w) == 0.0);
  std::stringstream bad("not a grid");
  CHECK_THROWS_AS(read_grid_binary(bad), ValidationError);
}

}  // TEST_SUITE
