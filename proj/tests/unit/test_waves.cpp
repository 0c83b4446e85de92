#include "doctest.h"

#include <cmath>
#include <string>

#include "lvlab/errors.hpp"
#include "lvlab/metrics.hpp"
#include "lvlab/speeds.hpp"
#include "lvlab/types.hpp"
#include "lvlab/waves.hpp"

using namespace lvlab;

TEST_CASE("single-species wave solves its profile equation") {
  const GridSpec grid{-60.0, 60.0, 2401};
  const WaveProfile w = solve_kpp_wave(2.5, 1.0, 1.0, grid, Normalization::TailAmplitudeOne);
  CHECK(w.residual_sup <= 1e-9);
  CHECK(kpp_residual_sup(w) == doctest::Approx(w.residual_sup));
  for (std::size_t i = 0; i + 1 < grid.n; ++i) CHECK(w.values[i + 1] <= w.values[i] + 1e-12);
  CHECK(w.values.front() <= 1.0 + 1e-9);
  CHECK(w.values.front() >= 1.0 - 1e-6);
  // tail normalization: values ~ e^{-tau x} with unit prefactor
  const auto window = decay_window(w.grid, w.values);
  const DecayFit tail = fit_decay(w.grid, w.values, window.first, window.second);
  CHECK(tail.rate == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(tail.prefactor == doctest::Approx(1.0).epsilon(0.02));
  CHECK(tail.r_squared > 0.9999);
}

TEST_CASE("half-level normalization pins the phase at the origin") {
  const GridSpec grid{-60.0, 60.0, 2401};
  const WaveProfile w = solve_kpp_wave(2.5, 1.0, 1.0, grid, Normalization::HalfAtZero);
  const std::size_t mid = grid.n / 2;
  CHECK(grid.x(mid) == doctest::Approx(0.0));
  CHECK(w.values[mid] == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("grids that cannot hold the tail datum are rejected") {
  // at c = 2.5 the tail rate is 1/2, so x_max = 40 leaves e^{-20} at the edge
  CHECK_THROWS_AS(
      (void)solve_kpp_wave(2.5, 1.0, 1.0, GridSpec{-40.0, 40.0, 1601},
                           Normalization::HalfAtZero),
      Error);
}

TEST_CASE("subminimal speeds are rejected") {
  const GridSpec grid{-30.0, 30.0, 1201};
  CHECK_THROWS_AS((void)solve_kpp_wave(1.9, 1.0, 1.0, grid, Normalization::HalfAtZero), Error);
}

TEST_CASE("rescaled wave solves the rescaled equation") {
  const GridSpec grid{-60.0, 60.0, 2401};
  const WaveProfile base = solve_kpp_wave(2.6, 1.0, 1.0, grid, Normalization::TailAmplitudeOne);
  const WaveProfile scaled = rescale_wave(base, 2.0, 0.5);
  CHECK(scaled.d == 2.0);
  CHECK(scaled.r == 0.5);
  CHECK(scaled.speed == doctest::Approx(2.6 * std::sqrt(2.0 * 0.5)));
  CHECK(kpp_residual_sup(scaled) <= 1e-8);
}

TEST_CASE("suggested grid keeps both tails resolved") {
  const GridSpec grid = suggest_wave_grid(5.2, 1.0, 1.0, 0.05);
  CHECK(grid.h() == doctest::Approx(0.05).epsilon(1e-12));
  const double tau = slow_decay_root(1.0, 1.0, 5.2);
  CHECK(std::exp(-tau * grid.x_max) < 1e-9);
  CHECK(grid.x_min < -20.0);
  const WaveProfile w = solve_kpp_wave(5.2, 1.0, 1.0, grid, Normalization::TailAmplitudeOne);
  CHECK(w.residual_sup <= 1e-9);
}

TEST_CASE("symmetric bistable connection is a standing reflection pair") {
  const SystemWave wave = solve_bistable_wave({2.0, 2.0, 1.0, 1.0}, GridSpec{-40.0, 40.0, 1601});
  CHECK(std::abs(wave.speed) <= 1e-3);
  CHECK(wave.residual_sup <= 1e-9);
  double defect = 0.0;
  for (std::size_t i = 0; i < wave.grid.n; ++i)
    defect = std::max(defect, std::abs(wave.u[i] - wave.v[wave.grid.n - 1 - i]));
  CHECK(defect <= 1e-6);
  // e2 on the left, e1 on the right
  CHECK(wave.u.front() <= 1e-6);
  CHECK(wave.v.front() >= 1.0 - 1e-6);
  CHECK(wave.u.back() >= 1.0 - 1e-6);
  CHECK(wave.v.back() <= 1e-6);
}

TEST_CASE("asymmetric bistable connection strictly moves") {
  // b > a: v suffers more from the competition, so the u-side advances and
  // the connection picks up a nonzero speed.
  const SystemWave wave = solve_bistable_wave({2.0, 3.0, 1.0, 1.0}, GridSpec{-40.0, 40.0, 1601});
  CHECK(wave.residual_sup <= 1e-9);
  CHECK(std::abs(wave.speed) > 1e-3);
}

TEST_CASE("spreading estimate approaches the pulled invasion speed from below") {
  const SpeedEstimate est =
      estimate_minimal_speed({0.5, 0.5, 1.0, 1.0}, EquilibriumTag::EStar, EquilibriumTag::E2, 30.0);
  // pulled fronts carry a logarithmic lag, so the finite-time fit sits a few
  // percent under 2 sqrt(1 - a)
  CHECK(est.speed == doctest::Approx(2.0 * std::sqrt(0.5)).epsilon(0.10));
  CHECK(est.speed < 2.0 * std::sqrt(0.5) + 1e-6);
  CHECK(est.samples >= 8);
  CHECK_THROWS_AS((void)estimate_minimal_speed({0.5, 0.5, 1.0, 1.0}, EquilibriumTag::E1,
                                               EquilibriumTag::EStar, 30.0),
                  Error);
}
