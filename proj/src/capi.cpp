#include "lvlab.h"

#include <cstring>
#include <exception>
#include <string>

#include "lvlab/config.hpp"
#include "lvlab/csv.hpp"
#include "lvlab/entire.hpp"
#include "lvlab/errors.hpp"
#include "lvlab/scenario.hpp"
#include "lvlab/speeds.hpp"
#include "lvlab/types.hpp"
#include "lvlab/verify.hpp"
#include "lvlab/workers.hpp"

struct lvlab_ctx {
  lvlab::Config cfg;
};

namespace {

thread_local std::string g_last_error;
thread_local std::string g_report;

int to_status(lvlab::Code code) { return static_cast<int>(code); }

// Runs fn, translating exceptions into status codes + last-error text.
template <class Fn>
int guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return LVLAB_OK;
  } catch (const lvlab::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LVLAB_E_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return LVLAB_E_INTERNAL;
  }
}

int copy_out(const std::string& s, char* buf, size_t cap) {
  if (buf == nullptr || cap == 0) return LVLAB_E_INVALID_ARGUMENT;
  const size_t n = s.size() < cap - 1 ? s.size() : cap - 1;
  std::memcpy(buf, s.data(), n);
  buf[n] = '\0';
  return LVLAB_OK;
}

} // namespace

extern "C" {

const char* lvlab_status_name(int status) {
  if (status < 0 || status > LVLAB_E_INTERNAL) return "unknown";
  return lvlab::code_name(static_cast<lvlab::Code>(status));
}

const char* lvlab_version(void) { return "0.1.0"; }

const char* lvlab_last_error(void) { return g_last_error.c_str(); }

const char* lvlab_report_text(void) { return g_report.c_str(); }

lvlab_ctx* lvlab_ctx_new(void) {
  try {
    return new lvlab_ctx{};
  } catch (...) {
    return nullptr;
  }
}

void lvlab_ctx_free(lvlab_ctx* ctx) { delete ctx; }

int lvlab_ctx_load_file(lvlab_ctx* ctx, const char* path) {
  if (ctx == nullptr || path == nullptr) return LVLAB_E_INVALID_ARGUMENT;
  return guarded([&] {
    const lvlab::Config loaded = lvlab::Config::from_file(path);
    for (const auto& [key, value] : loaded.entries()) ctx->cfg.set(key, value);
  });
}

int lvlab_ctx_set(lvlab_ctx* ctx, const char* key, const char* value) {
  if (ctx == nullptr || key == nullptr || value == nullptr) return LVLAB_E_INVALID_ARGUMENT;
  return guarded([&] { ctx->cfg.set(key, value); });
}

int lvlab_ctx_get(lvlab_ctx* ctx, const char* key, char* buf, size_t cap) {
  if (ctx == nullptr || key == nullptr) return LVLAB_E_INVALID_ARGUMENT;
  if (!ctx->cfg.has(key)) {
    g_last_error = std::string("missing config key '") + key + "'";
    return LVLAB_E_INVALID_ARGUMENT;
  }
  return copy_out(ctx->cfg.get_string(key), buf, cap);
}

int lvlab_set_workers(int workers) {
  if (workers < 1) {
    g_last_error = "workers must be >= 1";
    return LVLAB_E_INVALID_ARGUMENT;
  }
  lvlab::set_worker_cap(workers);
  return LVLAB_OK;
}

int lvlab_run_scenario(lvlab_ctx* ctx, const char* scenario, const char* out_dir,
                       int* checks_failed) {
  if (ctx == nullptr) return LVLAB_E_INVALID_ARGUMENT;
  return guarded([&] {
    lvlab::Config cfg = ctx->cfg;
    if (scenario != nullptr && scenario[0] != '\0') cfg.set("run.scenario", scenario);
    if (out_dir != nullptr && out_dir[0] != '\0') cfg.set("run.out", out_dir);
    const lvlab::RunConfig rc = lvlab::run_config_from(cfg);
    const lvlab::Manifest m = lvlab::run_scenario(rc);
    g_report = m.render();
    if (checks_failed != nullptr) {
      int failed = 0;
      for (const auto& c : m.checks())
        if (!c.pass) ++failed;
      *checks_failed = failed;
    }
  });
}

int lvlab_run_verify(const char* suite, unsigned long long seed, const char* out_dir,
                     int* checks_failed) {
  if (suite == nullptr) return LVLAB_E_INVALID_ARGUMENT;
  return guarded([&] {
    const std::vector<lvlab::CheckResult> results = lvlab::verify_suite(suite, seed);
    lvlab::Manifest m;
    m.note("suite", suite);
    m.note("seed", std::to_string(seed));
    for (const auto& c : results) m.check(c);
    g_report = m.render();
    if (out_dir != nullptr && out_dir[0] != '\0') m.write(out_dir);
    if (checks_failed != nullptr) {
      int failed = 0;
      for (const auto& c : results)
        if (!c.pass) ++failed;
      *checks_failed = failed;
    }
  });
}

int lvlab_speed_values(double a, double b, double d, double r, double c, double lambda,
                       double out[4]) {
  if (out == nullptr) return LVLAB_E_INVALID_ARGUMENT;
  return guarded([&] {
    const lvlab::ModelParams p{a, b, d, r};
    const lvlab::SpeedTable st = lvlab::speed_table(p, c, lambda);
    out[0] = st.mu;
    out[1] = st.c_v;
    out[2] = st.tau_tilde_c;
    out[3] = lvlab::admissible_lambda_upper(p, c);
  });
}

int lvlab_classify_regime(double a, double b, double d, double r, char* buf, size_t cap) {
  int status = LVLAB_OK;
  const int guard = guarded([&] {
    const lvlab::Regime regime = lvlab::classify_regime({a, b, d, r});
    status = copy_out(lvlab::regime_name(regime), buf, cap);
  });
  return guard != LVLAB_OK ? guard : status;
}

int lvlab_gauge_eval(double mu, double eps, double big_m, double t, double out[3]) {
  if (out == nullptr) return LVLAB_E_INVALID_ARGUMENT;
  return guarded([&] {
    const lvlab::TimeGauge g = lvlab::make_time_gauge(mu, eps, big_m);
    out[0] = g.p(t);
    out[1] = g.q(t);
    out[2] = g.shift_r(t);
  });
}

} // extern "C"
