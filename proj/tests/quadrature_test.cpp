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

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "optosqueeze/errors.hpp"

using namespace optosqueeze;

namespace {

constexpr double kPi = std::numbers::pi;

const ModeLayout kTwo = ModeLayout::mech_opt();

// Drift matrix of the momentum-damped oscillator, dX = w P, dP = -w X - g P.
Eigen::Matrix2d drift(double gamma, double omega) {
  Eigen::Matrix2d a;
  a << 0.0, omega, -omega, -gamma;
  return a;
}

// RK4 integration of R' = A R and V' = A V + V A^T + D with D = diag(0, 2 g N).
void integrate(double gamma, double omega, double nbar, double t, Eigen::Matrix2d* r,
               Eigen::Matrix2d* v) {
  const Eigen::Matrix2d a = drift(gamma, omega);
  Eigen::Matrix2d d = Eigen::Matrix2d::Zero();
  d(1, 1) = 2.0 * gamma * (2.0 * nbar + 1.0);
  auto fr = [&](const Eigen::Matrix2d& x) -> Eigen::Matrix2d { return a * x; };
  auto fv = [&](const Eigen::Matrix2d& x) -> Eigen::Matrix2d {
    return a * x + x * a.transpose() + d;
  };
  const int steps = 20000;
  const double h = t / steps;
  *r = Eigen::Matrix2d::Identity();
  *v = Eigen::Matrix2d::Zero();
  for (int i = 0; i < steps; ++i) {
    const Eigen::Matrix2d k1 = fr(*r), k2 = fr(*r + 0.5 * h * k1), k3 = fr(*r + 0.5 * h * k2),
                          k4 = fr(*r + h * k3);
    *r += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const Eigen::Matrix2d l1 = fv(*v), l2 = fv(*v + 0.5 * h * l1), l3 = fv(*v + 0.5 * h * l2),
                          l4 = fv(*v + h * l3);
    *v += h / 6.0 * (l1 + 2.0 * l2 + 2.0 * l3 + l4);
  }
}

}  // namespace

TEST_SUITE("quadrature") {

TEST_CASE("layout lookup") {
  const ModeLayout layout({"a", "b", "c"});
  CHECK(layout.dimension() == 6);
  CHECK(layout.x_index("b") == 2);
  CHECK(layout.p_index("c") == 5);
  CHECK(layout.contains("a"));
  CHECK_FALSE(layout.contains("z"));
  CHECK_THROWS_AS(layout.index_of("z"), ValidationError);
  CHECK_THROWS_AS(ModeLayout({"a", "a"}), ValidationError);
}

TEST_CASE("qnd_xx adds each position to the other momentum") {
  const Matrix m = qnd_xx(0.7, "mech", "opt", kTwo).matrix();
  Matrix expected = Matrix::Identity(4, 4);
  expected(3, 0) = 0.7;  // P_opt += chi X_mech
  expected(1, 2) = 0.7;  // P_mech += chi X_opt
  CHECK((m - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("qnd_pp adds each momentum to the other position") {
  const Matrix m = qnd_pp(-1.3, "mech", "opt", kTwo).matrix();
  Matrix expected = Matrix::Identity(4, 4);
  expected(2, 1) = -1.3;
  expected(0, 3) = -1.3;
  CHECK((m - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("rotation by a quarter turn sends X to P and P to -X") {
  const Eigen::Matrix2d r = rotation("mech", kPi / 2, ModeLayout::mech()).matrix();
  const Eigen::Vector2d quad(0.3, -0.8);  // (X, P) values
  const Eigen::Vector2d rotated = r * quad;
  CHECK(rotated(0) == doctest::Approx(-0.8));
  CHECK(rotated(1) == doctest::Approx(-0.3));
}

TEST_CASE("primitive interactions are symplectic") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    const LinearMap m = qnd_xx(u(rng), "mech", "opt", kTwo) * rotation("opt", u(rng), kTwo) *
                        qnd_pp(u(rng), "opt", "mech", kTwo) * rotation("mech", u(rng), kTwo);
    CHECK(symplectic_defect(m) < 1e-10);
  }
}

TEST_CASE("composition applies the first channel first") {
  const GaussianChannel a(qnd_xx(1.0, "mech", "opt", kTwo));
  const GaussianChannel b(rotation("mech", 0.4, kTwo));
  const GaussianChannel ab = compose({a, b});
  const Matrix expected = b.map().matrix() * a.map().matrix();
  CHECK((ab.map().matrix() - expected).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("composition propagates noise through later maps") {
  const ModeLayout one = ModeLayout::mech();
  const GaussianChannel loss = beamsplitter_loss(0.3, 0.0, "mech", one);
  const GaussianChannel rot(rotation("mech", 1.1, one));
  const GaussianChannel both = compose({loss, rot, loss});
  // Isotropic noise is rotation invariant: total noise is 0.3 * 0.7 + 0.3.
  CHECK(both.noise().covariance()(0, 0) == doctest::Approx(0.3 * 0.7 + 0.3));
  CHECK(both.noise().covariance()(0, 1) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("lossless damped rotation equals rotation") {
  const Eigen::Matrix2d r = lossy_rotation_block(0.0, 2.0, 0.37);
  const Eigen::Matrix2d expected = rotation("mech", 0.74, ModeLayout::mech()).matrix();
  CHECK((r - expected).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("damped propagator matches direct integration of the equations of motion") {
  for (const double gamma : {1e-3, 0.05, 0.4, 1.5}) {
    for (const double t : {0.1, 1.0, 4.0}) {
      Eigen::Matrix2d r_num, v_num;
      integrate(gamma, 1.0, 2.5, t, &r_num, &v_num);
      const Eigen::Matrix2d r = lossy_rotation_block(gamma, 1.0, t);
      const Eigen::Matrix2d v = thermal_noise_block(gamma, 1.0, 2.5, t);
      CHECK((r - r_num).cwiseAbs().maxCoeff() < 1e-9);
      CHECK((v - v_num).cwiseAbs().maxCoeff() < 1e-8);
    }
  }
}

TEST_CASE("thermal noise equals N (I - R R^T)") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> g(1e-6, 1.9);
  std::uniform_real_distribution<double> tt(0.0, 30.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double gamma = g(rng);
    const double t = tt(rng);
    const double nbar = 3.0;
    const Eigen::Matrix2d r = lossy_rotation_block(gamma, 1.0, t);
    const Eigen::Matrix2d expected =
        (2.0 * nbar + 1.0) * (Eigen::Matrix2d::Identity() - r * r.transpose());
    CHECK((thermal_noise_block(gamma, 1.0, nbar, t) - expected).cwiseAbs().maxCoeff() < 1e-11);
  }
}

TEST_CASE("thermal noise limits") {
  CHECK(thermal_noise_block(0.01, 1.0, 4e4, 0.0).cwiseAbs().maxCoeff() == 0.0);
  const Eigen::Matrix2d late = thermal_noise_block(0.01, 1.0, 5.0, 1e5);
  CHECK((late - 11.0 * Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-10);
  // Small gamma t: leading order is gamma t N in the momentum and (gamma t^3/3) N in position.
  const double gamma = 1e-9;
  const double t = 1e-3;
  const Eigen::Matrix2d tiny = thermal_noise_block(gamma, 1.0, 0.0, t);
  CHECK(tiny(1, 1) == doctest::Approx(gamma * t).epsilon(1e-6));
  CHECK(tiny(0, 0) == doctest::Approx(gamma * t * t * t / 3.0).epsilon(1e-3));
}

TEST_CASE("sigma factor and overdamping") {
  CHECK(sigma_factor(0.0, 3.0) == 1.0);
  CHECK(sigma_factor(1.2, 1.0) == doctest::Approx(0.8));
  CHECK(sigma_factor(2.0, 1.0) == 0.0);
  CHECK_THROWS_AS(sigma_factor(2.5, 1.0), ValidationError);
  CHECK_THROWS_AS(lossy_rotation_block(2.0, 1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(lossy_rotation_block(0.1, 1.0, -1.0), ValidationError);
}

TEST_CASE("beamsplitter loss keeps vacuum fixed") {
  const GaussianChannel loss = beamsplitter_loss(0.5, 0.0, "mech", ModeLayout::mech());
  const Matrix m = loss.map().matrix();
  const Matrix out = m * m.transpose() + loss.noise().covariance();
  CHECK((out - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(beamsplitter_loss(1.5, 0.0, "mech", ModeLayout::mech()), ValidationError);
}

TEST_CASE("uncertainty and physicality margins") {
  CHECK(uncertainty_margin(Matrix::Identity(2, 2)) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(uncertainty_margin(0.5 * Matrix::Identity(2, 2)) < -0.4);
  CHECK(physicality_margin(damped_evolution(0.1, 1.0, 2.0, 3.0, "mech", ModeLayout::mech())) >
        -1e-12);
  // Attenuation without the matching noise is not a physical channel.
  const GaussianChannel bad(LinearMap(0.5 * Matrix::Identity(2, 2), ModeLayout::mech()));
  CHECK(physicality_margin(bad) < -0.1);
}

TEST_CASE("noise terms must be symmetric positive semidefinite") {
  Matrix asym(2, 2);
  asym << 1.0, 0.2, 0.1, 1.0;
  CHECK_THROWS_AS(NoiseTerm(Vector::Zero(2), asym), ValidationError);
  CHECK_THROWS_AS(NoiseTerm(Vector::Zero(2), -Matrix::Identity(2, 2)), ValidationError);
}

TEST_CASE("collective QND shares the pulse by coupling") {
  const ModeLayout layout({"m1", "m2", "opt"});
  const std::vector<ModeCoupling> c = {{"m1", 3.0}, {"m2", 1.0}};
  const Matrix m = qnd_xx_collective(c, 2.0, "opt", layout).matrix();
  CHECK(m(5, 0) == doctest::Approx(1.5));
  CHECK(m(5, 2) == doctest::Approx(0.5));
  CHECK(m(1, 4) == doctest::Approx(1.5));
  CHECK(m(3, 4) == doctest::Approx(0.5));
  CHECK(symplectic_defect(LinearMap(m, layout)) < 1e-12);
  const std::vector<ModeCoupling> single = {{"m1", 1.0}};
  const ModeLayout two({"m1", "opt"});
  CHECK((qnd_xx_collective(single, 0.8, "opt", two).matrix() -
         qnd_xx(0.8, "m1", "opt", two).matrix())
            .cwiseAbs()
            .maxCoeff() == 0.0);
}

}  // TEST_SUITE
