#include "doctest.h"

#include <cmath>

#include "lvlab/errors.hpp"
#include "lvlab/speeds.hpp"
#include "lvlab/types.hpp"

using namespace lvlab;

namespace {
const ModelParams kP0{0.5, 0.5, 1.0, 1.0};
}

TEST_CASE("regime classification covers all quadrants") {
  CHECK(classify_regime({0.5, 0.5, 1, 1}) == Regime::WeakCompetition);
  CHECK(classify_regime({2.0, 3.0, 1, 1}) == Regime::Bistable);
  CHECK(classify_regime({0.5, 2.0, 1, 1}) == Regime::UWins);
  CHECK(classify_regime({2.0, 0.5, 1, 1}) == Regime::VWins);
  CHECK_THROWS_AS(classify_regime({1.0, 0.5, 1, 1}), Error);
  try {
    classify_regime({0.5, 1.0, 1, 1});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Code::RegimeMismatch);
    CHECK(std::string(e.what()).find("degenerate") != std::string::npos);
  }
}

TEST_CASE("coexistence state solves both null-clines") {
  const ModelParams p{0.3, 0.7, 2.0, 0.5};
  const Equilibrium s = e_star(p);
  CHECK(std::abs(1.0 - s.u - p.a * s.v) < 1e-14);
  CHECK(std::abs(1.0 - s.v - p.b * s.u) < 1e-14);
  CHECK(std::abs(e_star(kP0).u - 2.0 / 3.0) < 1e-15);
}

TEST_CASE("competitive order compares componentwise with v flipped") {
  CHECK(k_leq({0.2, 0.8}, {0.4, 0.1}));
  CHECK(!k_leq({0.4, 0.1}, {0.2, 0.8}));
  CHECK(!k_leq({0.2, 0.1}, {0.4, 0.8}));
  CHECK(norm1({-0.3, 0.4}) == doctest::Approx(0.7));
}

TEST_CASE("symbol and derived speeds at the reference point") {
  const SpeedTable st = speed_table(kP0, 2.5, 0.2);
  CHECK(st.mu == doctest::Approx(0.54).epsilon(1e-15));
  CHECK(st.c_v == doctest::Approx(5.2).epsilon(1e-15));
  CHECK(st.tau_c.value() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(st.tau_tilde_c == doctest::Approx(0.35078105935821213).epsilon(1e-14));
  CHECK(st.delta_v.value() == doctest::Approx(0.015898890117216347).epsilon(1e-12));
  // mu = g(lambda) = lambda (c_v - c) ties the three quantities together
  CHECK(st.mu == doctest::Approx(0.2 * (st.c_v - 2.5)).epsilon(1e-15));
  CHECK(g_eval(kP0, 2.5, 0.2) == doctest::Approx(st.mu).epsilon(1e-15));
}

TEST_CASE("slow and approach roots solve their quadratics") {
  const double tau = slow_decay_root(1.0, 1.0, 2.5);
  CHECK(tau == doctest::Approx(0.5).epsilon(1e-14));
  const double d = 1.7, r = 0.8, c = 3.1;
  const double s = slow_decay_root(d, r, c);
  CHECK(d * s * s - c * s + r == doctest::Approx(0.0).epsilon(1e-13));
  const double a = approach_root(d, r, c);
  CHECK(a > 0.0);
  CHECK(d * a * a + c * a - r == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("admissible decay window endpoint sits on the shifted symbol") {
  const double up = admissible_lambda_upper(kP0, 2.5);
  // at the upper endpoint the symbol equals r(1 - b)
  CHECK(g_eval(kP0, 2.5, up) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(up > 0.2); // the reference decay is admissible
}

TEST_CASE("limiting decay root matches its frozen value") {
  const LimitingConstants lm = limiting_lambda3(kP0, 2.5);
  CHECK(lm.lambda3 == doctest::Approx(0.21922359359558485).epsilon(1e-14));
  CHECK(lm.c_v3 == doctest::Approx(4.780776406404415).epsilon(1e-14));
  // the root solves g(lambda) = r(1 - b)
  CHECK(g_eval(kP0, 2.5, lm.lambda3) == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("merging constants match their frozen values") {
  const MergingConstants mg = merging_constants({0.5, 2.0, 1.0, 1.0}, 3.0);
  CHECK(mg.lambda4 == doctest::Approx(0.1771243444677047).epsilon(1e-14));
  CHECK(mg.c_u3 == doctest::Approx(5.822875655532296).epsilon(1e-14));
  // lambda4 solves lambda^2 - c_v lambda + a = 0 (slow branch)
  CHECK(mg.lambda4 * mg.lambda4 - 3.0 * mg.lambda4 + 0.5 ==
        doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("compound speeds take the larger of measured and closed form") {
  ExternalSpeeds ext;
  ext.C1_star = 1.4;
  ext.C2_star = 1.4;
  const SpeedTable st = speed_table(kP0, 2.5, 0.2, ext);
  REQUIRE(st.c_u1.has_value());
  REQUIRE(st.c_v_tilde.has_value());
  CHECK(*st.c_u1 == doctest::Approx(std::max(1.4, st.c_acc.value())).epsilon(1e-15));
  CHECK(*st.c_v_tilde >= 1.4);
  // with a huge measured floor the measured value wins
  ext.C2_star = 100.0;
  const SpeedTable st2 = speed_table(kP0, 2.5, 0.2, ext);
  CHECK(*st2.c_v_tilde == doctest::Approx(100.0));
}
