#include "doctest.h"

#include <cmath>

#include "lvlab/eigenpair.hpp"
#include "lvlab/entire.hpp"
#include "lvlab/errors.hpp"
#include "lvlab/types.hpp"
#include "lvlab/waves.hpp"

using namespace lvlab;

namespace {

const ModelParams kP0{0.5, 0.5, 1.0, 1.0};
const GridSpec kGrid{-60.0, 60.0, 2401};

const WaveProfile& base_wave() {
  static const WaveProfile w =
      solve_kpp_wave(2.5, 1.0, 1.0, kGrid, Normalization::TailAmplitudeOne);
  return w;
}

const SandwichFamily& family() {
  static const SandwichFamily f = [] {
    const EigenPair pair = solve_eigenpair(kP0, 2.5, 0.2, base_wave());
    return make_sandwich_family(EntireKind::Divergent, kP0, 2.5, base_wave(), pair.phi,
                                pair.psi, pair.mu, 0.2);
  }();
  return f;
}

} // namespace

TEST_CASE("time gauge honors its defining relations") {
  const TimeGauge g = make_time_gauge(0.54, 0.0027, 100.0);
  CHECK(g.k() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(g.p(0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(g.q(0.0) == doctest::Approx(-std::log(1.5)).epsilon(1e-15));
  for (double t : {-12.0, -7.5, -3.0, 0.0})
    CHECK(gauge_identity_defect(g, t) <= 1e-13);
  // deep in the past both branches ride the plain exponential
  CHECK(std::abs(g.p(-50.0) - 0.54 * -50.0) < 1e-10);
  CHECK(std::abs(g.q(-50.0) - 0.54 * -50.0) < 1e-10);
  // the p-branch blows up where k e^{mu t} reaches 1
  CHECK_THROWS_AS((void)g.p(std::log(2.0) / 0.54 + 0.01), Error);
  const GaugeTriple triple = gauge_eval(g, -2.0);
  CHECK(triple.p == doctest::Approx(g.p(-2.0)));
  CHECK(triple.r_shift == doctest::Approx(g.shift_r(-2.0)));
  CHECK(triple.r_shift < 0.0);
  // amplitude caps at one: eps M must stay under mu
  CHECK_THROWS_AS((void)make_time_gauge(0.54, 0.0054, 100.0), Error);
}

TEST_CASE("walls are ordered and tighten backward in time") {
  const SandwichFamily& f = family();
  CHECK(f.perturbation_sup() > 0.0);
  const SubSuper now = build_sub_super(f, 0.0);
  CHECK(k_leq(now.sub, now.super, 0.0));
  const SubSuper then = build_sub_super(f, -6.0);
  CHECK(k_leq(then.sub, then.super, 0.0));
  double gap_now = 0.0, gap_then = 0.0;
  for (std::size_t i = 0; i < f.grid.n; ++i) {
    gap_now = std::max(gap_now, (now.super.u[i] - now.sub.u[i]) + (now.sub.v[i] - now.super.v[i]));
    gap_then = std::max(gap_then,
                         (then.super.u[i] - then.sub.u[i]) + (then.sub.v[i] - then.super.v[i]));
  }
  CHECK(gap_then < gap_now);
  CHECK(sandwich_inequality_violation(f, -4.0) <= 1e-10);
}

TEST_CASE("convenience wall builder matches the family evaluation") {
  const EigenPair pair = solve_eigenpair(kP0, 2.5, 0.2, base_wave());
  const SubSuper direct =
      build_sub_super(EntireKind::Divergent, pair, base_wave(), family().gauge, -3.0, kGrid);
  const SubSuper viaFamily = build_sub_super(family(), -3.0);
  CHECK(sup_abs_diff(direct.sub.u, viaFamily.sub.u) <= 1e-12);
  CHECK(sup_abs_diff(direct.super.v, viaFamily.super.v) <= 1e-12);
}

TEST_CASE("backward construction converges on a short ladder") {
  const EntireRun run = backward_construct(EntireKind::Divergent, kP0, 2.5, 0.2, 0.0, kGrid,
                                           {-8.0, -10.0}, 0.0);
  REQUIRE(run.gaps.size() == 2);
  CHECK(run.gaps.back() < 1e-5);
  CHECK(run.gaps.back() <= run.gaps.front());
  for (double defect : run.chain_defects) CHECK(defect <= 1e-7);
  CHECK(run.sandwich_worst <= 1e-6);
  // snapshots at whole-number times from the deepest rung
  REQUIRE(!run.snapshot_times.empty());
  CHECK(run.snapshot_times.front() == doctest::Approx(-10.0));
  CHECK(run.snapshot_times.back() == doctest::Approx(0.0));
  REQUIRE(run.lower_snapshots.size() == run.snapshot_times.size());
  // the returned solution is the midpoint of the deepest rung at t_end
  for (std::size_t i = 0; i < kGrid.n; i += 97) {
    CHECK(run.solution.u[i] ==
          doctest::Approx(0.5 * (run.lower_end.u[i] + run.upper_end.u[i])).epsilon(1e-14));
    CHECK(run.solution.v[i] ==
          doctest::Approx(0.5 * (run.lower_end.v[i] + run.upper_end.v[i])).epsilon(1e-14));
  }
  // walls bracket the solution in the competitive order
  CHECK(k_leq(run.lower_end, run.upper_end, 0.0));
}

TEST_CASE("shallow ladders are rejected as unconverged") {
  try {
    (void)backward_construct(EntireKind::Divergent, kP0, 2.5, 0.2, 0.0, kGrid, {-1.0, -2.0},
                             0.0);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Code::NonConvergence);
  }
}

TEST_CASE("ladders must strictly decrease and stay clear of the end time") {
  CHECK_THROWS_AS((void)backward_construct(EntireKind::Divergent, kP0, 2.5, 0.2, 0.0, kGrid,
                                           {-6.0, -6.0}, 0.0),
                  Error);
  CHECK_THROWS_AS((void)backward_construct(EntireKind::Divergent, kP0, 2.5, 0.2, 0.0, kGrid,
                                           {-0.5}, 0.0),
                  Error);
}

TEST_CASE("forward extension embeds the solution exactly on shared nodes") {
  const EntireRun run = backward_construct(EntireKind::Divergent, kP0, 2.5, 0.2, 0.0, kGrid,
                                           {-8.0, -10.0}, 0.0);
  const GridSpec lab{-80.0, 80.0, 3201};
  const auto traj = forward_extend(run, 2.0, lab, 1.0, 0.005);
  REQUIRE(traj.size() == 3); // t = 0, 1, 2
  CHECK(traj.front().time == doctest::Approx(0.0));
  CHECK(traj.back().time == doctest::Approx(2.0));
  CHECK(traj.front().frame_speed == doctest::Approx(0.0)); // lab frame
  // embedded initial state agrees with the construction on shared nodes
  const std::size_t off = static_cast<std::size_t>(std::llround((kGrid.x_min - lab.x_min) / lab.h()));
  for (std::size_t i = 0; i < kGrid.n; i += 193) {
    CHECK(traj.front().u[off + i] == doctest::Approx(run.solution.u[i]).epsilon(1e-12));
    CHECK(traj.front().v[off + i] == doctest::Approx(run.solution.v[i]).epsilon(1e-12));
  }
  // left fill is the saturated wave plateau, right fill decays toward zero
  CHECK(traj.front().u.front() == doctest::Approx(run.solution.u.front()).epsilon(1e-6));
  CHECK(traj.front().v.back() <= run.solution.v.back() + 1e-12);
  // misaligned lab grids are rejected
  CHECK_THROWS_AS((void)forward_extend(run, 2.0, GridSpec{-80.3, 80.0, 3201}, 1.0, 0.005),
                  Error);
}

TEST_CASE("explicit envelope walls relax at exactly the fitted rate") {
  const SystemWave wave = solve_bistable_wave({2.0, 2.0, 1.0, 1.0}, GridSpec{-40.0, 40.0, 1601});
  BistableEnvelope env;
  env.params = {2.0, 2.0, 1.0, 1.0};
  env.wave = wave;
  env.delta1 = 0.25;
  env.P0 = 1e-3;
  env.Q0 = 1e-3;
  env.xi0 = -10.0;
  env.shift = 1.0;
  // far enough right that the profile argument clamps, so the wave factors out
  const GridSpec probe{37.5, 39.5, 5};
  const StatePair a = bistable_envelope_eval(env, 0.0, probe);
  const StatePair b = bistable_envelope_eval(env, 4.0, probe);
  REQUIRE(a.u.size() == probe.n);
  const double relax = 1.0 - std::exp(-0.25 * 4.0);
  CHECK(b.u.back() - a.u.back() == doctest::Approx(env.Q0 * relax).epsilon(1e-12));
  CHECK(a.v.back() - b.v.back() == doctest::Approx(env.P0 * relax).epsilon(1e-12));
  CHECK_THROWS_AS((void)bistable_envelope_eval(env, -1.0, probe), Error);
}
