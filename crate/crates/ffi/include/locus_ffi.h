#ifndef LOCUS_FFI_H
#define LOCUS_FFI_H

/* Generated by cbindgen from crates/ffi; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LocusStatus {
  LOCUS_STATUS_OK = 0,
  LOCUS_STATUS_NULL_POINTER = 1,
  LOCUS_STATUS_INVALID_ARGUMENT = 2,
  LOCUS_STATUS_SCHEMA = 3,
  LOCUS_STATUS_COLLISION = 4,
  LOCUS_STATUS_NO_CONVERGENCE = 5,
  LOCUS_STATUS_BUFFER_TOO_SMALL = 6,
  LOCUS_STATUS_PANIC = 7,
} LocusStatus;

/**
 * Opaque arrangement handle.
 */
typedef struct LocusArrangement LocusArrangement;

typedef struct LocusTolerances {
  double first;
  double locus;
  double reflection;
} LocusTolerances;

typedef struct LocusSolveInfo {
  /**
   * Reduced-gradient infinity norm over the largest charge product.
   */
  double gradient_inf_norm;
  size_t iterations;
  double potential;
} LocusSolveInfo;

typedef struct LocusVerdict {
  bool first_locus_pass;
  bool all_locus_pass;
  bool coarsely_coxeter;
  /**
   * Largest relative residual over all lines and orders.
   */
  double max_relative_residual;
  /**
   * Largest relative force on the particle ensemble.
   */
  double max_relative_force;
} LocusVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code.
 */
const char *locus_status_string(enum LocusStatus status);

/**
 * Message of the last failure on this thread, or NULL. Valid until the next
 * failing call on the same thread.
 */
const char *locus_last_error_message(void);

struct LocusTolerances locus_default_tolerances(void);

/**
 * Solves for the equilibrium arrangement of `n` cyclic multiplicities.
 *
 * Non-positive `grad_tol` or zero `max_iters` select the defaults. `info` may
 * be NULL.
 *
 * # Safety
 * `mults` must point to `n` readable values and `out` must be writable.
 */
enum LocusStatus locus_solve(const uint32_t *mults,
                             size_t n,
                             double grad_tol,
                             size_t max_iters,
                             struct LocusArrangement **out,
                             struct LocusSolveInfo *info);

/**
 * Builds an arrangement from multiplicities and angles in `[0, 2π)`.
 *
 * # Safety
 * `mults` and `thetas` must point to `n` readable values; `out` must be writable.
 */
enum LocusStatus locus_arrangement_new(const uint32_t *mults,
                                       const double *thetas,
                                       size_t n,
                                       struct LocusArrangement **out);

/**
 * Parses `{"multiplicities": [...], "thetas": [...]}`.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum LocusStatus locus_arrangement_from_json(const char *json, struct LocusArrangement **out);

/**
 * Serializes the arrangement; free the string with [`locus_string_free`].
 *
 * # Safety
 * `a` must be a live handle; `out` must be writable.
 */
enum LocusStatus locus_arrangement_to_json(const struct LocusArrangement *a, char **out);

/**
 * # Safety
 * `a` must be NULL or a handle not yet freed.
 */
void locus_arrangement_free(struct LocusArrangement *a);

/**
 * Number of lines, or 0 for NULL.
 *
 * # Safety
 * `a` must be NULL or a live handle.
 */
size_t locus_arrangement_len(const struct LocusArrangement *a);

/**
 * Copies the angles into `out[0..len]`.
 *
 * # Safety
 * `a` must be a live handle and `out` must have room for `capacity` values.
 */
enum LocusStatus locus_arrangement_thetas(const struct LocusArrangement *a,
                                          double *out,
                                          size_t capacity);

/**
 * Copies the multiplicities into `out[0..len]`.
 *
 * # Safety
 * `a` must be a live handle and `out` must have room for `capacity` values.
 */
enum LocusStatus locus_arrangement_multiplicities(const struct LocusArrangement *a,
                                                  uint32_t *out,
                                                  size_t capacity);

/**
 * # Safety
 * `a` must be a live handle; `out` must be writable.
 */
enum LocusStatus locus_cm_potential(const struct LocusArrangement *a, double *out);

/**
 * Force on particle `i` (half of the potential's partial derivative).
 *
 * # Safety
 * `a` must be a live handle; `out` must be writable.
 */
enum LocusStatus locus_cm_force(const struct LocusArrangement *a, size_t i, double *out);

/**
 * Residual of the `k`-th locus equation at line `i`. Either output may be NULL.
 *
 * # Safety
 * `a` must be a live handle; non-NULL outputs must be writable.
 */
enum LocusStatus locus_residual(const struct LocusArrangement *a,
                                size_t i,
                                uint32_t k,
                                double *residual,
                                double *relative);

/**
 * Locus verdicts; `tol` may be NULL for the defaults.
 *
 * # Safety
 * `a` must be a live handle; `out` must be writable.
 */
enum LocusStatus locus_verify(const struct LocusArrangement *a,
                              const struct LocusTolerances *tol,
                              struct LocusVerdict *out);

/**
 * Full report as JSON; free the string with [`locus_string_free`].
 *
 * # Safety
 * `a` must be a live handle; `out` must be writable; `tol` may be NULL.
 */
enum LocusStatus locus_report_json(const struct LocusArrangement *a,
                                   const struct LocusTolerances *tol,
                                   char **out);

/**
 * # Safety
 * `mults` must point to `n` readable values; `out` must be writable.
 */
enum LocusStatus locus_is_coarsely_symmetric(const uint32_t *mults, size_t n, bool *out);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library and not yet freed.
 */
void locus_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LOCUS_FFI_H */
