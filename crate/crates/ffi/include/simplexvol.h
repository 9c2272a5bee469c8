#ifndef SIMPLEXVOL_H
#define SIMPLEXVOL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum {
  SVOL_STATUS_OK = 0,
  SVOL_STATUS_PARSE = 2,
  SVOL_STATUS_PRECONDITION = 3,
  SVOL_STATUS_NUMERIC = 4,
  SVOL_STATUS_IO = 5,
  SVOL_STATUS_NULL_POINTER = 6,
  SVOL_STATUS_PANIC = 7,
} SvolStatus;

/**
 * An integrand.
 */
typedef struct SvolFunction SvolFunction;

/**
 * A cubature rule on the standard simplex.
 */
typedef struct SvolRule SvolRule;

/**
 * A simplex, exact when built from rational text.
 */
typedef struct SvolSimplex SvolSimplex;

/**
 * Relaxation volumes of one report.
 */
typedef struct {
  double integral;
  double perspective;
  double naive;
  double cutoff_amount;
  /**
   * Meaningful only when `ratio_defined` is nonzero.
   */
  double cutoff_ratio;
  int32_t ratio_defined;
  /**
   * Sum of the error estimates of the two volumes.
   */
  double error;
} SvolVolumes;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or NULL. Valid until the next failing call.
 */
const char *svol_last_error(void);

/**
 * Parses a shorthand such as `std:2`, `interval:1,2` or `shifted:2,1,1,1`.
 *
 * # Safety
 * `text` must be a nul-terminated string; `out` must be writable.
 */
SvolStatus svol_simplex_parse(const char *text, SvolSimplex **out);

/**
 * Builds a simplex from `(d+1)·d` row-major vertex coordinates.
 *
 * # Safety
 * `coords` must point to `(d+1)·d` doubles; `out` must be writable.
 */
SvolStatus svol_simplex_new(uintptr_t d, const double *coords, SvolSimplex **out);

/**
 * # Safety
 * `s` must come from a simplex constructor or be NULL.
 */
void svol_simplex_free(SvolSimplex *s);

/**
 * Dimension, or 0 for NULL.
 *
 * # Safety
 * `s` must be a live handle or NULL.
 */
uintptr_t svol_simplex_dim(const SvolSimplex *s);

/**
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
SvolStatus svol_simplex_volume(const SvolSimplex *s, double *out);

/**
 * Parses `poly:…`, `linpow:…`, `exp:…` or `logsumexp:…`.
 *
 * # Safety
 * `text` must be a nul-terminated string; `out` must be writable.
 */
SvolStatus svol_function_parse(const char *text, SvolFunction **out);

/**
 * # Safety
 * `f` must come from [`svol_function_parse`] or be NULL.
 */
void svol_function_free(SvolFunction *f);

/**
 * `∫_J f` by the best available route, with an absolute error estimate.
 *
 * # Safety
 * Handles must be live; `value` and `error` must be writable.
 */
SvolStatus svol_integrate(const SvolSimplex *s,
                          const SvolFunction *f,
                          double *value,
                          double *error);

/**
 * Exact `∫_J f` as a newly allocated `"p/q"` string; free it with [`svol_string_free`].
 *
 * # Safety
 * Handles must be live; `out` must be writable.
 */
SvolStatus svol_integrate_exact(const SvolSimplex *s, const SvolFunction *f, char **out);

/**
 * # Safety
 * `p` must come from this library or be NULL.
 */
void svol_string_free(char *p);

/**
 * Perspective and naive volumes; `rule_s` sets the cubature degree `2·rule_s+1` where needed.
 *
 * # Safety
 * Handles must be live; `out` must be writable.
 */
SvolStatus svol_volumes(const SvolSimplex *s,
                        const SvolFunction *f,
                        uintptr_t rule_s,
                        SvolVolumes *out);

/**
 * Grundmann-Möller rule of degree `2s+1` on Δ_d.
 *
 * # Safety
 * `out` must be writable.
 */
SvolStatus svol_rule_gm(uintptr_t d, uintptr_t s, SvolRule **out);

/**
 * Conical product rule of degree `2s+1` on Δ_d.
 *
 * # Safety
 * `out` must be writable.
 */
SvolStatus svol_rule_conical(uintptr_t d, uintptr_t s, SvolRule **out);

/**
 * # Safety
 * `r` must come from a rule constructor or be NULL.
 */
void svol_rule_free(SvolRule *r);

/**
 * Number of points, or 0 for NULL.
 *
 * # Safety
 * `r` must be a live handle or NULL.
 */
uintptr_t svol_rule_len(const SvolRule *r);

/**
 * Copies point `i` into `coords` (`d` doubles) and its weight into `weight`.
 *
 * # Safety
 * `r` must be live; `coords` must hold `d` doubles; `weight` must be writable.
 */
SvolStatus svol_rule_point(const SvolRule *r, uintptr_t i, double *coords, double *weight);

/**
 * `h_q(values)`, the complete homogeneous symmetric polynomial.
 *
 * # Safety
 * `values` must point to `n` doubles; `out` must be writable.
 */
SvolStatus svol_h_complete(uint32_t q, const double *values, uintptr_t n, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SIMPLEXVOL_H */
