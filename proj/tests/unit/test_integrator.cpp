#include "doctest.h"

#include <cmath>
#include <vector>

#include "lvlab/integrator.hpp"
#include "lvlab/interp.hpp"
#include "lvlab/rng.hpp"
#include "lvlab/types.hpp"
#include "lvlab/waves.hpp"

using namespace lvlab;

namespace {

StatePair flat_state(const GridSpec& grid, double u0, double v0) {
  StatePair s;
  s.grid = grid;
  s.u.assign(grid.n, u0);
  s.v.assign(grid.n, v0);
  s.u_cap = 1.0;
  s.v_cap = 1.0;
  return s;
}

} // namespace

TEST_CASE("spatially flat runs follow the logistic clock") {
  const GridSpec grid{-5.0, 5.0, 101};
  StatePair s = flat_state(grid, 0.1, 0.0);
  IntegratorConfig cfg;
  cfg.dt = 0.002;
  const ModelParams p{0.5, 0.5, 1.0, 1.0};
  const StatePair end = integrate(s, cfg, p, 2.0, {}).back();
  const double exact = 0.1 * std::exp(2.0) / (1.0 + 0.1 * (std::exp(2.0) - 1.0));
  for (double u : end.u) CHECK(u == doctest::Approx(exact).epsilon(2e-3));
  CHECK(end.time == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("snapshots land on the requested times") {
  const GridSpec grid{-2.0, 2.0, 41};
  IntegratorConfig cfg;
  cfg.dt = 0.03; // does not divide the snapshot spacing
  const ModelParams p{0.5, 0.5, 1.0, 1.0};
  const auto traj = integrate(flat_state(grid, 0.3, 0.2), cfg, p, 1.0, {0.25, 0.5, 0.75});
  REQUIRE(traj.size() == 4); // three snapshots plus the final state
  CHECK(traj[0].time == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(traj[1].time == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(traj[3].time == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("box and order are preserved under random smooth data") {
  Rng rng(21);
  const GridSpec grid{-8.0, 8.0, 161};
  const ModelParams p{0.7, 0.4, 1.3, 0.8};
  StatePair A = flat_state(grid, 0.0, 0.0), B = A;
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double x = grid.x(i);
    A.u[i] = 0.3 + 0.2 * std::sin(0.7 * x) * std::cos(1.3 * x + 0.4);
    B.u[i] = A.u[i] + 0.15 * (1.0 + std::sin(0.4 * x));
    B.v[i] = 0.25 + 0.2 * std::cos(0.9 * x);
    A.v[i] = B.v[i] + 0.1 * (1.0 + std::cos(1.1 * x + 0.2));
  }
  REQUIRE(k_leq(A, B, 0.0));
  IntegratorConfig cfg;
  cfg.dt = 0.01;
  const StatePair A1 = integrate(A, cfg, p, 3.0, {}).back();
  const StatePair B1 = integrate(B, cfg, p, 3.0, {}).back();
  CHECK(k_violation(A1, B1) <= 1e-12);
  for (std::size_t i = 0; i < grid.n; ++i) {
    CHECK(A1.u[i] >= 0.0);
    CHECK(A1.u[i] <= 1.0);
    CHECK(A1.v[i] >= 0.0);
    CHECK(A1.v[i] <= 1.0);
  }
}

TEST_CASE("a traveling profile is stationary in its own frame") {
  const GridSpec grid{-60.0, 60.0, 2401};
  const WaveProfile w = solve_kpp_wave(2.5, 1.0, 1.0, grid, Normalization::HalfAtZero);
  StatePair s;
  s.grid = grid;
  s.u = w.values;
  s.v.assign(grid.n, 0.0);
  s.frame_speed = 2.5;
  s.u_cap = 1.0;
  s.v_cap = 1.0;
  IntegratorConfig cfg;
  cfg.dt = 0.002;
  const ModelParams p{0.5, 0.5, 1.0, 1.0}; // v stays 0: single-species dynamics
  const StatePair end = integrate(s, cfg, p, 1.0, {}).back();
  const double x0 = find_level_crossing(grid, s.u, 0.5, true);
  const double x1 = find_level_crossing(grid, end.u, 0.5, true);
  CHECK(std::abs(x1 - x0) <= 5e-3);
}

TEST_CASE("dirichlet and robin edges hold their data") {
  const GridSpec grid{0.0, 10.0, 201};
  StatePair s = flat_state(grid, 0.5, 0.0);
  IntegratorConfig cfg;
  cfg.dt = 0.005;
  cfg.u_left = BcSpec::dirichlet(1.0);
  cfg.u_right = BcSpec::robin(0.5, 0.0); // decay rate of the wave tail
  const ModelParams p{0.5, 0.5, 1.0, 1.0};
  const StatePair end = integrate(s, cfg, p, 1.5, {}).back();
  CHECK(end.u.front() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(end.u.back() < end.u[grid.n - 2]); // tail keeps decreasing outward
}
