#ifndef MMSEC_H
#define MMSEC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum MmsecStatus {
  MMSEC_STATUS_OK = 0,
  MMSEC_STATUS_NULL_POINTER = 1,
  MMSEC_STATUS_INVALID_UTF8 = 2,
  MMSEC_STATUS_VALIDATION = 3,
  MMSEC_STATUS_DOMAIN = 4,
  MMSEC_STATUS_CONVERGENCE = 5,
  MMSEC_STATUS_UNSUPPORTED = 6,
  MMSEC_STATUS_PARSE = 7,
  MMSEC_STATUS_IO = 8,
  MMSEC_STATUS_PANIC = 9,
} MmsecStatus;

/**
 * Opaque scenario handle.
 */
typedef struct MmsecScenario MmsecScenario;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null after a success.
 * The pointer stays valid until the next `mmsec_*` call on this thread.
 */
const char *mmsec_last_error_message(void);

/**
 * Create a scenario from a built-in preset name.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a writable pointer.
 */
enum MmsecStatus mmsec_scenario_from_preset(const char *name, struct MmsecScenario **out);

/**
 * Create a scenario from TOML text.
 *
 * # Safety
 * `toml` must be a NUL-terminated string and `out` a writable pointer.
 */
enum MmsecStatus mmsec_scenario_from_toml(const char *toml, struct MmsecScenario **out);

/**
 * Release a scenario. Null is ignored.
 *
 * # Safety
 * `scenario` must come from a `mmsec_scenario_*` constructor and not be used afterwards.
 */
void mmsec_scenario_free(struct MmsecScenario *scenario);

/**
 * Set one sweep axis (`lambda_e`, `lambda_b`, `tc_db`, `te_db`, `phi`, `theta_b`).
 *
 * # Safety
 * `scenario` must be a live handle and `axis` a NUL-terminated string.
 */
enum MmsecStatus mmsec_scenario_set(struct MmsecScenario *scenario, const char *axis, double value);

/**
 * Analytical value of a metric (`tau`, `tau_n`, `tau_c`, `p_con`, `p_sec`, `n_p`, `omega`).
 *
 * # Safety
 * `scenario` must be a live handle, `metric` a NUL-terminated string, `out` writable.
 */
enum MmsecStatus mmsec_evaluate(const struct MmsecScenario *scenario,
                                const char *metric,
                                double *out);

/**
 * Monte Carlo estimate of a metric and its 95% confidence half-width.
 *
 * # Safety
 * `scenario` must be a live handle, `metric` a NUL-terminated string,
 * `estimate` and `ci_halfwidth` writable.
 */
enum MmsecStatus mmsec_simulate(const struct MmsecScenario *scenario,
                                const char *metric,
                                uint64_t trials,
                                uint64_t seed,
                                double *estimate,
                                double *ci_halfwidth);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MMSEC_H */
