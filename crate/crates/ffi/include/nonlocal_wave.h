#ifndef NONLOCAL_WAVE_H
#define NONLOCAL_WAVE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Evaluation path for [`nlw_multiplier`].
 */
typedef enum NlwPath {
  NLW_PATH_ROUTED = 0,
  NLW_PATH_HYPERGEOMETRIC = 1,
  NLW_PATH_QUADRATURE = 2,
  NLW_PATH_EXTENDED_QUADRATURE = 3,
  NLW_PATH_RADIAL_SERIES = 4,
  NLW_PATH_ASYMPTOTIC = 5,
} NlwPath;

/**
 * Result code of every fallible call.
 */
typedef enum NlwStatus {
  NLW_STATUS_OK = 0,
  NLW_STATUS_NULL_POINTER = 1,
  NLW_STATUS_DOMAIN = 2,
  NLW_STATUS_NON_CONVERGENCE = 3,
  NLW_STATUS_SHAPE = 4,
  NLW_STATUS_INSUFFICIENT_DATA = 5,
  NLW_STATUS_CORRUPTED_TABLE = 6,
  NLW_STATUS_PARSE = 7,
  NLW_STATUS_PANIC = 8,
} NlwStatus;

/**
 * Fourier coefficients on the box [−K, K]^n.
 */
typedef struct NlwField NlwField;

/**
 * Kernel parameters (n, δ, β).
 */
typedef struct NlwKernel NlwKernel;

/**
 * Multiplier values on every attained |k|² of a box.
 */
typedef struct NlwTable NlwTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or NULL after a
 * successful call. Valid until the next `nlw_*` call on the same thread.
 */
const char *nlw_last_error_message(void);

/**
 * Release a string returned by this library.
 *
 * # Safety
 * `s` must be NULL or a pointer obtained from this library and not yet freed.
 */
void nlw_string_free(char *s);

/**
 * Create kernel parameters. Requires n ≥ 1, δ > 0 and finite β.
 *
 * # Safety
 * `out` must be valid for writing one pointer.
 */
enum NlwStatus nlw_kernel_new(uint32_t n, double delta, double beta, struct NlwKernel **out);

/**
 * # Safety
 * `kernel` must be NULL or a live handle from [`nlw_kernel_new`].
 */
void nlw_kernel_free(struct NlwKernel *kernel);

/**
 * Normalization constant of the kernel.
 *
 * # Safety
 * `kernel` must be a live handle and `out` valid for writing.
 */
enum NlwStatus nlw_scaling_constant(const struct NlwKernel *kernel, double *out);

/**
 * Multiplier m(r) at frequency magnitude r ≥ 0 along the requested path.
 *
 * # Safety
 * `kernel` must be a live handle and `out` valid for writing.
 */
enum NlwStatus nlw_multiplier(const struct NlwKernel *kernel,
                              double r,
                              enum NlwPath path,
                              double *out);

/**
 * Tabulate the multiplier over the box [−K, K]^n.
 *
 * # Safety
 * `kernel` must be a live handle and `out` valid for writing one pointer.
 */
enum NlwStatus nlw_table_build(const struct NlwKernel *kernel,
                               uint32_t box_radius,
                               struct NlwTable **out);

/**
 * Table value at |k|² = `norm_sq`; `NLW_STATUS_DOMAIN` if not attained.
 *
 * # Safety
 * `table` must be a live handle and `out` valid for writing.
 */
enum NlwStatus nlw_table_get(const struct NlwTable *table, uint64_t norm_sq, double *out);

/**
 * Number of tabulated |k|² values; 0 for NULL.
 *
 * # Safety
 * `table` must be NULL or a live handle.
 */
size_t nlw_table_len(const struct NlwTable *table);

/**
 * # Safety
 * `table` must be NULL or a live handle from [`nlw_table_build`].
 */
void nlw_table_free(struct NlwTable *table);

/**
 * Real random field with |f̂_k| ~ (1+|k|)^−decay, reproducible from `seed`.
 *
 * # Safety
 * `out` must be valid for writing one pointer.
 */
enum NlwStatus nlw_field_synthetic(uint32_t dim,
                                   uint32_t box_radius,
                                   double decay,
                                   uint64_t seed,
                                   struct NlwField **out);

/**
 * Parse a field from its JSON form.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` valid for writing.
 */
enum NlwStatus nlw_field_from_json(const char *json, struct NlwField **out);

/**
 * Serialize a field to JSON. Free the result with [`nlw_string_free`].
 *
 * # Safety
 * `field` must be a live handle and `out` valid for writing one pointer.
 */
enum NlwStatus nlw_field_to_json(const struct NlwField *field, char **out);

/**
 * Sobolev norm ‖f‖_{H^q} over the box.
 *
 * # Safety
 * `field` must be a live handle and `out` valid for writing.
 */
enum NlwStatus nlw_field_sobolev_norm(const struct NlwField *field, double q, double *out);

/**
 * Coefficient at multi-index `k` (length must equal the field dimension).
 *
 * # Safety
 * `field` must be a live handle, `k` must point to `len` integers, and
 * `re`, `im` must be valid for writing.
 */
enum NlwStatus nlw_field_coeff(const struct NlwField *field,
                               const int64_t *k,
                               size_t len,
                               double *re,
                               double *im);

/**
 * # Safety
 * `field` must be NULL or a live field handle.
 */
void nlw_field_free(struct NlwField *field);

/**
 * p-th time derivative of the solution at time t.
 *
 * With `b` NULL the problem is homogeneous (f, g required); with `f` and `g`
 * NULL it is forced (b required); otherwise all three are superposed.
 *
 * # Safety
 * Non-NULL handles must be live and `out` valid for writing one pointer.
 */
enum NlwStatus nlw_solve(const struct NlwTable *table,
                         const struct NlwField *f,
                         const struct NlwField *g,
                         const struct NlwField *b,
                         double t,
                         uint32_t p,
                         struct NlwField **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NONLOCAL_WAVE_H */
