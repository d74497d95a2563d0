#ifndef RAGLAB_H
#define RAGLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Selects the distance algorithm of `raglab_discriminant_distance`.
 */
typedef enum RaglabDistanceMode {
  RAGLAB_DISTANCE_MODE_EMPIRICAL = 0,
  RAGLAB_DISTANCE_MODE_CERTIFIED = 1,
} RaglabDistanceMode;

typedef enum RaglabStatus {
  RAGLAB_STATUS_OK = 0,
  RAGLAB_STATUS_NULL_POINTER = 1,
  RAGLAB_STATUS_INVALID_ARGUMENT = 2,
  RAGLAB_STATUS_DIMENSION = 3,
  RAGLAB_STATUS_DEGENERATE = 4,
  RAGLAB_STATUS_PARITY = 5,
  RAGLAB_STATUS_PRECISION = 6,
  RAGLAB_STATUS_SINGULAR = 7,
  RAGLAB_STATUS_NEAR_TANGENCY = 8,
  RAGLAB_STATUS_NON_GENERIC_DIRECTION = 9,
  RAGLAB_STATUS_OPTIMIZATION = 10,
  RAGLAB_STATUS_COMMON_COMPONENT = 11,
  RAGLAB_STATUS_UNSUPPORTED = 12,
  RAGLAB_STATUS_UNKNOWN_EXPERIMENT = 13,
  RAGLAB_STATUS_INVALID_PARAMETER = 14,
  RAGLAB_STATUS_IO = 15,
  RAGLAB_STATUS_JSON = 16,
  RAGLAB_STATUS_PANIC = 99,
} RaglabStatus;

/**
 * A real homogeneous polynomial of degree `d` in `n + 1` variables.
 */
typedef struct RaglabPoly RaglabPoly;

/**
 * An experiment report.
 */
typedef struct RaglabReport RaglabReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version; a static string.
 */
const char *raglab_version(void);

/**
 * Message for the last failure on this thread; empty after success. The
 * pointer stays valid until the next raglab call on the same thread.
 */
const char *raglab_last_error(void);

/**
 * Builds a polynomial from `nterms` terms; `exponents` holds `n + 1`
 * entries per term and repeated exponents accumulate.
 *
 * # Safety
 * `exponents` must point to `nterms·(n+1)` values, `coeffs` to `nterms`.
 */
enum RaglabStatus raglab_poly_new(size_t n,
                                  size_t d,
                                  const uint32_t *exponents,
                                  const double *coeffs,
                                  size_t nterms,
                                  struct RaglabPoly **result);

/**
 * A Kostlan polynomial drawn from stream `index` of `seed`.
 *
 * # Safety
 * `result` must be a valid pointer.
 */
enum RaglabStatus raglab_poly_kostlan(size_t n,
                                      size_t d,
                                      uint64_t seed,
                                      uint64_t index,
                                      struct RaglabPoly **result);

/**
 * # Safety
 * `p` must come from this library and not be used afterwards; null is
 * ignored.
 */
void raglab_poly_free(struct RaglabPoly *p);

/**
 * Writes `n` and `d`.
 *
 * # Safety
 * All pointers must be valid.
 */
enum RaglabStatus raglab_poly_shape(const struct RaglabPoly *p, size_t *n, size_t *d);

/**
 * # Safety
 * `x` must point to `len` values; `len` must equal `n + 1`.
 */
enum RaglabStatus raglab_poly_eval(const struct RaglabPoly *p,
                                   const double *x,
                                   size_t len,
                                   double *value);

/**
 * # Safety
 * All pointers must be valid.
 */
enum RaglabStatus raglab_poly_bw_norm(const struct RaglabPoly *p, double *norm);

/**
 * Distinct real zeros in `RP¹` of a binary form.
 *
 * # Safety
 * All pointers must be valid.
 */
enum RaglabStatus raglab_count_projective_roots(const struct RaglabPoly *p, size_t *count);

/**
 * Connected components in `RP²` of the zero set of a ternary form.
 *
 * # Safety
 * All pointers must be valid.
 */
enum RaglabStatus raglab_curve_components(const struct RaglabPoly *p, size_t level, size_t *b0);

/**
 * Bombieri–Weyl distance to the discriminant. `lower_bound` receives the
 * certified lower bound in certified mode and NaN otherwise; it may be null.
 *
 * # Safety
 * `p` and `distance` must be valid; `lower_bound` may be null.
 */
enum RaglabStatus raglab_discriminant_distance(const struct RaglabPoly *p,
                                               enum RaglabDistanceMode mode,
                                               double *distance,
                                               double *lower_bound);

/**
 * Runs an experiment. `config_json` is a JSON object of parameters or null
 * for the defaults.
 *
 * # Safety
 * `name` and a non-null `config_json` must be NUL-terminated strings.
 */
enum RaglabStatus raglab_run_experiment(const char *name,
                                        const char *config_json,
                                        struct RaglabReport **result);

/**
 * # Safety
 * `r` must come from this library and not be used afterwards; null is
 * ignored.
 */
void raglab_report_free(struct RaglabReport *r);

/**
 * Headline statistics. Any out pointer may be null.
 *
 * # Safety
 * `r` must be valid.
 */
enum RaglabStatus raglab_report_summary(const struct RaglabReport *r,
                                        double *mean,
                                        double *se,
                                        size_t *replicates,
                                        size_t *discarded);

/**
 * Whether every invariant check in the report passed.
 *
 * # Safety
 * All pointers must be valid.
 */
enum RaglabStatus raglab_report_checks_pass(const struct RaglabReport *r, bool *pass);

/**
 * Serializes the report; release the string with `raglab_string_free`.
 *
 * # Safety
 * All pointers must be valid.
 */
enum RaglabStatus raglab_report_to_json(const struct RaglabReport *r, bool raw, char **json);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards; null is
 * ignored.
 */
void raglab_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RAGLAB_H */
