#include "doctest.h"

#include <cmath>
#include <complex>

#include "lvlab/errors.hpp"
#include "lvlab/spectrum.hpp"
#include "lvlab/types.hpp"
#include "lvlab/waves.hpp"

using namespace lvlab;

namespace {
const ModelParams kP0{0.5, 0.5, 1.0, 1.0};
}

TEST_CASE("characteristic roots solve both limiting quadratics") {
  const std::complex<double> mu(0.3, 0.4);
  const CharacteristicRoots roots = characteristic_roots(kP0, 2.5, mu);
  // +inf limit: d s^2 + c s + (r - mu) = 0
  for (const auto& s : roots.lambda_pm) {
    const std::complex<double> res = s * s + 2.5 * s + (1.0 - mu);
    CHECK(std::abs(res) < 1e-12);
  }
  // -inf limit: d s^2 + c s + (r(1-b) - mu) = 0
  for (const auto& s : roots.lambda_tilde_pm) {
    const std::complex<double> res = s * s + 2.5 * s + (0.5 - mu);
    CHECK(std::abs(res) < 1e-12);
  }
}

TEST_CASE("region verdicts and indices at the pinned probes") {
  const FredholmVerdict low = classify_mu(kP0, 2.5, {0.25, 0.0});
  CHECK(low.region == MuRegion::Omega2);
  CHECK(low.i_plus == 0);
  CHECK(low.i_minus == 0);
  CHECK(low.index == 0);

  const FredholmVerdict mid = classify_mu(kP0, 2.5, {0.75, 0.0});
  CHECK(mid.region == MuRegion::Omega3);
  CHECK(mid.i_plus == 0);
  CHECK(mid.i_minus == 1);
  CHECK(mid.index == 1);

  const FredholmVerdict high = classify_mu(kP0, 2.5, {1.25, 0.0});
  CHECK(high.region == MuRegion::Omega1);
  CHECK(high.i_plus == 1);
  CHECK(high.i_minus == 1);
  CHECK(high.index == 0);
}

TEST_CASE("boundaries are flagged exactly") {
  CHECK(classify_mu(kP0, 2.5, {0.5, 0.0}).region == MuRegion::OnBoundary);
  CHECK(classify_mu(kP0, 2.5, {1.0, 0.0}).region == MuRegion::OnBoundary);
  // complex boundary point: Re mu = r - d (Im mu / c)^2 on the upper parabola
  const double im = 0.7;
  const double re = 1.0 - (im / 2.5) * (im / 2.5);
  CHECK(classify_mu(kP0, 2.5, {re, im}).region == MuRegion::OnBoundary);
  CHECK(classify_mu(kP0, 2.5, {re + 1e-6, im}).region == MuRegion::Omega1);
  CHECK(classify_mu(kP0, 2.5, {re - 1e-6, im}).region == MuRegion::Omega3);
}

TEST_CASE("region names are stable strings") {
  CHECK(std::string(mu_region_name(MuRegion::Omega1)) != "");
  CHECK(std::string(mu_region_name(MuRegion::Omega1)) !=
        std::string(mu_region_name(MuRegion::Omega2)));
}

TEST_CASE("polar angle settles at the arctangent of the slow root") {
  const GridSpec grid{-60.0, 60.0, 2401};
  const WaveProfile w = solve_kpp_wave(2.5, 1.0, 1.0, grid, Normalization::TailAmplitudeOne);
  const PolarTrajectory traj = polar_shoot(kP0, 2.5, 0.54, w, 0.5, grid.x_min);
  CHECK(traj.lambda_plus == doctest::Approx(-0.2).epsilon(1e-12));
  CHECK(traj.theta_floor == doctest::Approx(std::atan(-0.2)).epsilon(1e-12));
  CHECK(traj.terminal_theta ==
        doctest::Approx(-0.19739555984988072).epsilon(0.01));
  REQUIRE(traj.theta.size() == traj.xi_samples.size());
  // the angle stays inside the invariant wedge the whole way
  for (double th : traj.theta) {
    CHECK(th > traj.theta_floor - 1e-9);
    CHECK(th < 1.5707963267948966 + 1e-9);
  }
}

TEST_CASE("polar shoot rejects out-of-window rates and angles") {
  const GridSpec grid{-60.0, 60.0, 2401};
  const WaveProfile w = solve_kpp_wave(2.5, 1.0, 1.0, grid, Normalization::TailAmplitudeOne);
  CHECK_THROWS_AS((void)polar_shoot(kP0, 2.5, 0.49, w, 0.5, grid.x_min), Error); // mu too low
  CHECK_THROWS_AS((void)polar_shoot(kP0, 2.5, 1.01, w, 0.5, grid.x_min), Error); // mu too high
  CHECK_THROWS_AS((void)polar_shoot(kP0, 2.5, 0.54, w, -1.5, grid.x_min), Error);
  CHECK_THROWS_AS((void)polar_shoot(kP0, 2.5, 0.54, w, 0.5, grid.x_min - 5.0), Error);
}
