#ifndef ENVLAB_H
#define ENVLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum EnvlabCompute {
  ENVLAB_COMPUTE_WALLS = 0,
  ENVLAB_COMPUTE_RESONANCES = 1,
  ENVLAB_COMPUTE_ORDER = 2,
  ENVLAB_COMPUTE_STAB = 3,
  ENVLAB_COMPUTE_LIMIT = 4,
  ENVLAB_COMPUTE_RMATRIX = 5,
  ENVLAB_COMPUTE_INTERFACE = 6,
} EnvlabCompute;

typedef enum EnvlabStatus {
  ENVLAB_STATUS_OK = 0,
  ENVLAB_STATUS_NULL_POINTER = 1,
  ENVLAB_STATUS_INVALID_UTF8 = 2,
  ENVLAB_STATUS_INVALID_ARGUMENT = 3,
  /**
   * The computation ran and reported a violated identity; the JSON
   * diagnostic is still returned.
   */
  ENVLAB_STATUS_VIOLATION = 4,
  ENVLAB_STATUS_INTERNAL = 5,
} EnvlabStatus;

typedef enum EnvlabSuite {
  ENVLAB_SUITE_QUASIPERIODS = 0,
  ENVLAB_SUITE_ORTHOGONALITY = 1,
  ENVLAB_SUITE_FACTORIZATION = 2,
  ENVLAB_SUITE_MIRROR = 3,
  ENVLAB_SUITE_ALL = 4,
} EnvlabSuite;

/**
 * Opaque model handle.
 */
typedef struct EnvlabModel EnvlabModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a built-in model: `"toy"`, `"cotangent"` or `"hilb"` (with `n`
 * points; `n` is ignored otherwise).
 *
 * # Safety
 * `name` must be a valid C string and `out` a valid pointer.
 */
enum EnvlabStatus envlab_model_new(const char *name, uint32_t n, struct EnvlabModel **out);

/**
 * Loads a model from a JSON file.
 *
 * # Safety
 * `path` must be a valid C string and `out` a valid pointer.
 */
enum EnvlabStatus envlab_model_load(const char *path, struct EnvlabModel **out);

/**
 * Releases a model. Null is ignored.
 *
 * # Safety
 * `model` must come from a constructor above and not be used afterwards.
 */
void envlab_model_free(struct EnvlabModel *model);

/**
 * Number of fixed points, 0 for null.
 *
 * # Safety
 * `model` must be null or a live handle.
 */
size_t envlab_model_len(const struct EnvlabModel *model);

/**
 * Model name, borrowed from the handle; null for a null handle.
 *
 * # Safety
 * `model` must be null or a live handle.
 */
const char *envlab_model_name(const struct EnvlabModel *model);

/**
 * Label of fixed point `i`, borrowed from the handle; null when out of range.
 *
 * # Safety
 * `model` must be null or a live handle.
 */
const char *envlab_model_label(const struct EnvlabModel *model, size_t i);

/**
 * Computes `kind` and returns its JSON document in `out`.
 *
 * `slope`, `range_lo` and `range_hi` are exact rationals such as `"1/3"`
 * and may be null; the range defaults to `[0, 1]`. `chamber` is the sign
 * of the chamber.
 *
 * # Safety
 * Pointers must be null or valid C strings; `out` must be valid.
 */
enum EnvlabStatus envlab_compute(const struct EnvlabModel *model,
                                 enum EnvlabCompute kind,
                                 const char *slope,
                                 int32_t chamber,
                                 const char *range_lo,
                                 const char *range_hi,
                                 char **out);

/**
 * Runs a verification suite and returns the JSON report in `out`.
 * Returns `Violation` (with the report) when a check fails.
 *
 * # Safety
 * `slope` must be null or a valid C string; `out` must be valid.
 */
enum EnvlabStatus envlab_verify(const struct EnvlabModel *model,
                                enum EnvlabSuite suite,
                                const char *slope,
                                int32_t chamber,
                                char **out);

/**
 * Message of the last failure on this thread; empty if none. Valid until
 * the next failing call on the same thread.
 */
const char *envlab_last_error(void);

/**
 * Releases a string returned through an `out` parameter. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void envlab_string_free(char *s);

/**
 * Library version.
 */
const char *envlab_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ENVLAB_H */
