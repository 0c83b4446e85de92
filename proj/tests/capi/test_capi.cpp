#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "lvlab.h"

TEST_CASE("status names and version are exposed") {
  CHECK(std::string(lvlab_status_name(LVLAB_OK)) == "ok");
  CHECK(std::string(lvlab_status_name(LVLAB_E_REGIME_MISMATCH)) != "");
  CHECK(std::string(lvlab_status_name(9999)) == "unknown");
  CHECK(std::string(lvlab_version()).find('.') != std::string::npos);
}

TEST_CASE("closed-form speed values at the reference point") {
  double out[4] = {0, 0, 0, 0};
  REQUIRE(lvlab_speed_values(0.5, 0.5, 1.0, 1.0, 2.5, 0.2, out) == LVLAB_OK);
  CHECK(out[0] == doctest::Approx(0.54).epsilon(1e-14));
  CHECK(out[1] == doctest::Approx(5.2).epsilon(1e-14));
  CHECK(out[2] == doctest::Approx(0.35078105935821213).epsilon(1e-13));
  CHECK(out[3] > 0.2);
  CHECK(lvlab_speed_values(0.5, 0.5, 1.0, 1.0, 2.5, 0.2, nullptr) ==
        LVLAB_E_INVALID_ARGUMENT);
}

TEST_CASE("regime classification round trips and flags degeneracy") {
  char buf[64];
  REQUIRE(lvlab_classify_regime(0.5, 0.5, 1.0, 1.0, buf, sizeof(buf)) == LVLAB_OK);
  CHECK(std::string(buf) == "weak_competition");
  REQUIRE(lvlab_classify_regime(2.0, 3.0, 1.0, 1.0, buf, sizeof(buf)) == LVLAB_OK);
  CHECK(std::string(buf) == "bistable");
  const int status = lvlab_classify_regime(1.0, 0.5, 1.0, 1.0, buf, sizeof(buf));
  CHECK(status == LVLAB_E_REGIME_MISMATCH);
  CHECK(std::string(lvlab_last_error()).find("degenerate") != std::string::npos);
}

TEST_CASE("gauge evaluation matches the closed forms") {
  double out[3];
  REQUIRE(lvlab_gauge_eval(0.54, 0.0027, 100.0, 0.0, out) == LVLAB_OK);
  CHECK(out[0] == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(out[1] == doctest::Approx(-std::log(1.5)).epsilon(1e-14));
  CHECK(out[2] < 0.0);
  // p is undefined once k e^{mu t} reaches 1
  CHECK(lvlab_gauge_eval(0.54, 0.0027, 100.0, 5.0, out) == LVLAB_E_DOMAIN);
}

TEST_CASE("context holds configuration and reports missing keys") {
  lvlab_ctx* ctx = lvlab_ctx_new();
  REQUIRE(ctx != nullptr);
  CHECK(lvlab_ctx_set(ctx, "model.a", "0.5") == LVLAB_OK);
  char buf[32];
  CHECK(lvlab_ctx_get(ctx, "model.a", buf, sizeof(buf)) == LVLAB_OK);
  CHECK(std::string(buf) == "0.5");
  CHECK(lvlab_ctx_get(ctx, "model.zzz", buf, sizeof(buf)) == LVLAB_E_INVALID_ARGUMENT);
  CHECK(lvlab_ctx_load_file(ctx, "no/such/file.cfg") == LVLAB_E_IO);
  lvlab_ctx_free(ctx);
  lvlab_ctx_free(nullptr); // must be a no-op
}

TEST_CASE("scenario run writes outputs and reports check counts") {
  lvlab_ctx* ctx = lvlab_ctx_new();
  REQUIRE(ctx != nullptr);
  lvlab_ctx_set(ctx, "model.a", "0.5");
  lvlab_ctx_set(ctx, "model.b", "0.5");
  lvlab_ctx_set(ctx, "model.d", "1.0");
  lvlab_ctx_set(ctx, "model.r", "1.0");
  lvlab_ctx_set(ctx, "run.c", "2.5");
  lvlab_ctx_set(ctx, "run.lambda", "0.2");
  int failed = -1;
  REQUIRE(lvlab_run_scenario(ctx, "speeds-only", "capi_out", &failed) == LVLAB_OK);
  CHECK(failed == 0);
  const std::string report = lvlab_report_text();
  CHECK(report.find("PASS") != std::string::npos);
  CHECK(std::ifstream("capi_out/manifest.txt").good());
  CHECK(std::ifstream("capi_out/speeds.csv").good());
  lvlab_ctx_free(ctx);
}

TEST_CASE("degenerate parameters surface as a regime error") {
  lvlab_ctx* ctx = lvlab_ctx_new();
  REQUIRE(ctx != nullptr);
  lvlab_ctx_set(ctx, "model.a", "1.0");
  lvlab_ctx_set(ctx, "model.b", "0.5");
  lvlab_ctx_set(ctx, "model.d", "1.0");
  lvlab_ctx_set(ctx, "model.r", "1.0");
  int failed = -1;
  const int status = lvlab_run_scenario(ctx, "speeds-only", "capi_out_degenerate", &failed);
  CHECK(status == LVLAB_E_REGIME_MISMATCH);
  CHECK(std::string(lvlab_last_error()).find("degenerate") != std::string::npos);
  lvlab_ctx_free(ctx);
}

TEST_CASE("scenario preconditions surface as regime errors") {
  lvlab_ctx* ctx = lvlab_ctx_new();
  REQUIRE(ctx != nullptr);
  // bistable parameters cannot feed the weak-competition construction
  lvlab_ctx_set(ctx, "model.a", "2.0");
  lvlab_ctx_set(ctx, "model.b", "2.0");
  lvlab_ctx_set(ctx, "model.d", "1.0");
  lvlab_ctx_set(ctx, "model.r", "1.0");
  CHECK(lvlab_run_scenario(ctx, "divergent", "capi_out_mismatch", nullptr) ==
        LVLAB_E_REGIME_MISMATCH);
  CHECK(lvlab_run_scenario(ctx, "no-such-scenario", "capi_out_mismatch", nullptr) ==
        LVLAB_E_INVALID_ARGUMENT);
  lvlab_ctx_free(ctx);
}

TEST_CASE("verify runs the unit suite through the boundary") {
  int failed = -1;
  REQUIRE(lvlab_run_verify("unit", 42, "capi_verify_out", &failed) == LVLAB_OK);
  CHECK(failed == 0);
  CHECK(std::string(lvlab_report_text()).find("PASS") != std::string::npos);
  CHECK(std::ifstream("capi_verify_out/manifest.txt").good());
  CHECK(lvlab_run_verify("no-such-suite", 42, nullptr, &failed) == LVLAB_E_INVALID_ARGUMENT);
  CHECK(lvlab_run_verify(nullptr, 42, nullptr, &failed) == LVLAB_E_INVALID_ARGUMENT);
}

TEST_CASE("worker cap rejects nonpositive values") {
  CHECK(lvlab_set_workers(0) == LVLAB_E_INVALID_ARGUMENT);
  CHECK(lvlab_set_workers(2) == LVLAB_OK);
  CHECK(lvlab_set_workers(1) == LVLAB_OK);
}
