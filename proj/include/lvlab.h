/* C interface to the competition-diffusion laboratory.
 *
 * All entry points return a status code (LVLAB_OK on success). On failure,
 * lvlab_last_error() returns a thread-local message describing what went
 * wrong and, for staged runs, which stage failed first.
 */
#ifndef LVLAB_H
#define LVLAB_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

enum lvlab_status {
  LVLAB_OK = 0,
  LVLAB_E_INVALID_ARGUMENT = 1,
  LVLAB_E_DOMAIN = 2,
  LVLAB_E_NON_CONVERGENCE = 3,
  LVLAB_E_REGIME_MISMATCH = 4,
  LVLAB_E_GRID_MISMATCH = 5,
  LVLAB_E_LEVEL_NOT_CROSSED = 6,
  LVLAB_E_BUDGET_EXCEEDED = 7,
  LVLAB_E_CHAIN_VIOLATION = 8,
  LVLAB_E_ENVELOPE_FAILURE = 9,
  LVLAB_E_POSITIVITY_FAILURE = 10,
  LVLAB_E_STABILITY_VIOLATION = 11,
  LVLAB_E_SINGULAR_SYSTEM = 12,
  LVLAB_E_IO = 13,
  LVLAB_E_INTERNAL = 14
};

const char* lvlab_status_name(int status);
const char* lvlab_version(void);

/* Thread-local message from the most recent failing call. */
const char* lvlab_last_error(void);

/* Thread-local rendered manifest from the most recent run/verify call. */
const char* lvlab_report_text(void);

/* Opaque run context: holds configuration entries (section.key = value). */
typedef struct lvlab_ctx lvlab_ctx;

lvlab_ctx* lvlab_ctx_new(void);
void lvlab_ctx_free(lvlab_ctx* ctx);

int lvlab_ctx_load_file(lvlab_ctx* ctx, const char* path);
int lvlab_ctx_set(lvlab_ctx* ctx, const char* key, const char* value);

/* Copies the value for key into buf (NUL-terminated, truncating at cap).
 * Returns LVLAB_E_INVALID_ARGUMENT when the key is absent. */
int lvlab_ctx_get(lvlab_ctx* ctx, const char* key, char* buf, size_t cap);

/* Caps the worker threads used by parallel sections (>= 1). */
int lvlab_set_workers(int workers);

/* Runs one scenario pipeline and writes CSV outputs plus manifest.txt under
 * out_dir. When scenario is non-NULL it overrides run.scenario. On success
 * *checks_failed (if non-NULL) receives the number of failed manifest
 * checks; staged failures surface as a nonzero status instead. */
int lvlab_run_scenario(lvlab_ctx* ctx, const char* scenario, const char* out_dir,
                       int* checks_failed);

/* Runs a named check suite ("unit", "property", or "acceptance"), writing
 * manifest.txt under out_dir when non-NULL. seed feeds the property suite. */
int lvlab_run_verify(const char* suite, unsigned long long seed, const char* out_dir,
                     int* checks_failed);

/* Closed-form speed and decay constants at (a, b, d, r; c, lambda):
 * out[0] = mu, out[1] = c_v, out[2] = tau_tilde_c, out[3] = admissible
 * lambda upper bound. */
int lvlab_speed_values(double a, double b, double d, double r, double c, double lambda,
                       double out[4]);

/* Writes the regime name for (a, b, d, r) into buf. */
int lvlab_classify_regime(double a, double b, double d, double r, char* buf, size_t cap);

/* Time gauge evaluation: out[0] = p(t), out[1] = q(t), out[2] = r(t). */
int lvlab_gauge_eval(double mu, double eps, double big_m, double t, double out[3]);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* LVLAB_H */
