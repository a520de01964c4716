#ifndef AKGEO_H
#define AKGEO_H

/* Generated by cbindgen from crates/ffi/src; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum AkgeoStatus {
  AKGEO_STATUS_OK = 0,
  AKGEO_STATUS_NULL_POINTER = 1,
  AKGEO_STATUS_INVALID_UTF8 = 2,
  AKGEO_STATUS_PARSE = 3,
  AKGEO_STATUS_MODEL = 4,
  AKGEO_STATUS_EVAL = 5,
  AKGEO_STATUS_GEOMETRY = 6,
  AKGEO_STATUS_INVALID_ARGUMENT = 7,
  AKGEO_STATUS_PANIC = 8,
} AkgeoStatus;

/**
 * Parsed model file plus its metric; curvature is built on first use.
 */
typedef struct AkgeoModel AkgeoModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * Valid until the next library call on the same thread.
 */
const char *akgeo_last_error(void);

/**
 * Library version as a static string.
 */
const char *akgeo_version(void);

/**
 * # Safety
 * `s` must come from this library and not have been freed. Null is ignored.
 */
void akgeo_string_free(char *s);

/**
 * Evaluate an expression in `x1..x4`, `z1`, `z2`, `z1b`, `z2b`, `v` at `point[4]`.
 *
 * # Safety
 * `expr` must be a NUL-terminated string, `point` must hold four doubles and
 * `re`, `im` must be writable.
 */
enum AkgeoStatus akgeo_expr_eval(const char *expr, const double *point, double *re, double *im);

/**
 * Parse a model file. On success `*out` owns a handle for [`akgeo_model_free`].
 *
 * # Safety
 * `source` must be a NUL-terminated string and `out` writable.
 */
enum AkgeoStatus akgeo_model_parse(const char *source, uint64_t seed, struct AkgeoModel **out);

/**
 * # Safety
 * `m` must come from [`akgeo_model_parse`] and not have been freed. Null is ignored.
 */
void akgeo_model_free(struct AkgeoModel *m);

/**
 * Override a declared parameter such as `phi`.
 *
 * # Safety
 * `m` must be a live handle and `name` a NUL-terminated string.
 */
enum AkgeoStatus akgeo_model_set_param(struct AkgeoModel *m, const char *name, double value);

/**
 * Metric components at `point[4]`, row-major into `out[16]`.
 *
 * # Safety
 * `m` must be a live handle, `point` must hold four doubles and `out` sixteen.
 */
enum AkgeoStatus akgeo_model_metric(const struct AkgeoModel *m, const double *point, double *out);

/**
 * `n` seeded points from the model domain into `out[4n]`.
 *
 * # Safety
 * `m` must be a live handle and `out` must hold `4n` doubles.
 */
enum AkgeoStatus akgeo_model_sample(const struct AkgeoModel *m,
                                    uintptr_t n,
                                    uint64_t seed,
                                    double *out);

/**
 * Curvature summary at `point[4]` as a JSON object in `*out`.
 *
 * # Safety
 * `m` must be a live handle, `point` must hold four doubles and `out` be writable.
 */
enum AkgeoStatus akgeo_model_curvature_json(const struct AkgeoModel *m,
                                            const double *point,
                                            char **out);

/**
 * Run the built-in check suite. `*out` receives JSON lines ending in a summary
 * object and `*exit_status` is 0 iff every check passed.
 *
 * # Safety
 * `out` and `exit_status` must be writable.
 */
enum AkgeoStatus akgeo_verify_paper(uint64_t seed, uintptr_t samples, char **out, int *exit_status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AKGEO_H */
