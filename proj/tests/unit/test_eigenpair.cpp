#include "doctest.h"

#include <cmath>

#include "lvlab/eigenpair.hpp"
#include "lvlab/errors.hpp"
#include "lvlab/speeds.hpp"
#include "lvlab/types.hpp"
#include "lvlab/waves.hpp"

using namespace lvlab;

namespace {

const ModelParams kP0{0.5, 0.5, 1.0, 1.0};

const WaveProfile& reference_wave() {
  static const WaveProfile w =
      solve_kpp_wave(2.5, 1.0, 1.0, GridSpec{-60.0, 60.0, 2401}, Normalization::TailAmplitudeOne);
  return w;
}

} // namespace

TEST_CASE("linearized pair satisfies its equations with signed components") {
  const EigenPair pair = solve_eigenpair(kP0, 2.5, 0.2, reference_wave());
  CHECK(pair.mu == doctest::Approx(0.54).epsilon(1e-14));
  CHECK(pair.delta_v == doctest::Approx(0.015898890117216347).epsilon(1e-12));
  CHECK(pair.residual_psi <= 1e-9);
  CHECK(pair.residual_phi <= 1e-9);
  for (double v : pair.psi) CHECK(v >= -1e-12);
  for (double v : pair.phi) CHECK(v <= 1e-12);
  CHECK(pair.upsilon > 0.0);
  // right tail of psi is the unit-amplitude exponential
  const std::size_t last = pair.grid.n - 1;
  CHECK(pair.psi[last] == doctest::Approx(std::exp(-0.2 * pair.grid.x(last))).epsilon(1e-8));
  // residual helpers agree with the stored values
  CHECK(psi_residual_sup(pair.psi, 2.5, 0.2, kP0, reference_wave()) ==
        doctest::Approx(pair.residual_psi));
  CHECK(phi_residual_sup(pair.phi, pair.psi, reference_wave(), pair.mu, kP0.a) ==
        doctest::Approx(pair.residual_phi));
}

TEST_CASE("gauge-weighted psi never increases") {
  const EigenPair pair = solve_eigenpair(kP0, 2.5, 0.2, reference_wave());
  CHECK(psi_gauge_monotonicity_defect(pair.delta_v, pair.grid, pair.psi) <= 1e-12);
}

TEST_CASE("two-sided envelope pins psi and its frozen constants") {
  const PsiEnvelope env = build_psi_envelope(2.5, 0.2, kP0, reference_wave());
  CHECK(env.lambda_tilde == doctest::Approx(0.45).epsilon(1e-12));
  CHECK(env.D == doctest::Approx(2.1621621621621622).epsilon(1e-10));
  CHECK(env.eps2 == doctest::Approx(0.17539052967910609).epsilon(1e-10));
  CHECK(env.x_zero == doctest::Approx(3.0844348881186287).epsilon(1e-8));
  CHECK(env.sub_slack_worst >= -1e-10);
  CHECK(env.super_slack_worst <= 1e-10);
  CHECK(env.kink_gap >= -1e-10);
  const EigenPair pair = solve_eigenpair(kP0, 2.5, 0.2, reference_wave());
  CHECK(psi_envelope_violation(env, pair.grid, pair.psi) <= 1e-8);
  // the envelope actually brackets: lower is nontrivial somewhere
  CHECK(env.lower(8.0) > 0.0);
  CHECK(env.lower(8.0) <= env.upper(8.0));
}

TEST_CASE("limiting pair hits the left threshold with flat psi") {
  const VariantWeak vw = solve_variant_weak(kP0, 2.5, reference_wave(), reference_wave().grid);
  CHECK(vw.mu == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(vw.lambda3 == doctest::Approx(0.21922359359558485).epsilon(1e-13));
  CHECK(vw.residual_psi <= 1e-9);
  CHECK(vw.residual_phi <= 1e-9);
  CHECK(vw.upsilon > 0.0);
  CHECK(vw.phi_minus_inf == doctest::Approx(-kP0.a * vw.upsilon / 1.5).epsilon(1e-10));
  // psi approaches its positive left limit instead of vanishing
  CHECK(vw.psi.front() == doctest::Approx(vw.upsilon).epsilon(1e-6));
  for (std::size_t i = 0; i + 1 < vw.psi.size(); ++i) CHECK(vw.psi[i + 1] <= vw.psi[i] + 1e-12);
}

TEST_CASE("merging pair rides the fast v-wave") {
  const ModelParams p{0.5, 2.0, 1.0, 1.0};
  const GridSpec grid{-80.0, 64.0, 2881};
  const WaveProfile psi_cv = solve_kpp_wave(3.0, 1.0, 1.0, grid, Normalization::TailAmplitudeOne);
  const VariantHat hat = solve_variant_hat(p, 3.0, psi_cv, grid);
  CHECK(hat.mu_hat == doctest::Approx(0.5).epsilon(1e-14)); // 1 - a
  CHECK(hat.lambda4 == doctest::Approx(0.1771243444677047).epsilon(1e-13));
  CHECK(hat.residual_phi <= 1e-9);
  CHECK(hat.residual_psi <= 1e-9);
  for (double v : hat.phi_hat) CHECK(v >= -1e-12);
  for (double v : hat.psi_hat) CHECK(v <= 1e-12);
  CHECK(hat.upsilon_hat > 0.0);
  CHECK(hat.psi_minus_inf ==
        doctest::Approx(-p.r * p.b * hat.upsilon_hat / (p.r + 1.0 - p.a)).epsilon(1e-10));
  CHECK(hat.psi_hat.front() == doctest::Approx(hat.psi_minus_inf).epsilon(1e-5));
}

TEST_CASE("decay rates outside (0, c/2d) are rejected") {
  CHECK_THROWS_AS((void)solve_eigenpair(kP0, 2.5, 0.0, reference_wave()), Error);
  CHECK_THROWS_AS((void)solve_eigenpair(kP0, 2.5, 1.3, reference_wave()), Error);
  // the admissible window for the construction is tighter than the solver's
  CHECK(admissible_lambda_upper(kP0, 2.5) < 2.5 / 2.0);
}
