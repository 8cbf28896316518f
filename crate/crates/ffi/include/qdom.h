#ifndef QDOM_H
#define QDOM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Zero is success.
 */
typedef enum {
  QDOM_STATUS_OK = 0,
  QDOM_STATUS_NULL_POINTER = 1,
  QDOM_STATUS_INVALID_PARAMETER = 2,
  QDOM_STATUS_DOMAIN = 3,
  QDOM_STATUS_PATH = 4,
  QDOM_STATUS_CUT = 5,
  QDOM_STATUS_RESOLUTION = 6,
  QDOM_STATUS_EXTRAPOLATION = 7,
  QDOM_STATUS_NO_CONVERGENCE = 8,
  QDOM_STATUS_OUT_OF_FAMILY = 9,
  QDOM_STATUS_BRACKET = 10,
  QDOM_STATUS_BRANCH = 11,
  QDOM_STATUS_BUFFER_TOO_SMALL = 12,
  QDOM_STATUS_PANIC = 13,
} QdomStatus;

/**
 * A member of the map family with its Taylor coefficients.
 */
typedef struct QdomMap QdomMap;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *qdom_version(void);

/**
 * Copies the calling thread's last error message into `buf` (NUL
 * terminated, truncated to `len`). Returns the full message length plus
 * one, or 0 when there is no error.
 */
size_t qdom_last_error(char *buf, size_t len);

/**
 * Builds the map for `0 <= a < 1`, `c > 0`. On success `*out` owns a
 * handle to free with [`qdom_map_free`].
 */
QdomStatus qdom_map_new(double a, double c, QdomMap **out);

/**
 * Releases a handle from [`qdom_map_new`]. Null is ignored.
 */
void qdom_map_free(QdomMap *map);

QdomStatus qdom_map_params(const QdomMap *map, double *out_a, double *out_c);

/**
 * `f(w)` for `|w| <= 1`.
 */
QdomStatus qdom_map_eval(const QdomMap *map, double re, double im, double *out_re, double *out_im);

/**
 * Writes `f(e^{2πij/n})` for `j < n` into `out_re`/`out_im`, each of
 * capacity at least `n`, and `min |f'|` over those samples into
 * `out_min_abs_df` when it is not null.
 */
QdomStatus qdom_map_boundary(const QdomMap *map,
                             size_t n,
                             double *out_re,
                             double *out_im,
                             size_t capacity,
                             double *out_min_abs_df);

/**
 * Quadrature coefficients `a0`, `a1` of the rotated domain and the
 * largest normalised residual of the higher moments.
 */
QdomStatus qdom_map_quadrature(const QdomMap *map,
                               double *out_a0,
                               double *out_a1,
                               double *out_max_residual);

/**
 * The principal branch of `F(w)` off the cut `w <= -1/a`.
 */
QdomStatus qdom_eval_F(double a, double re, double im, double *out_re, double *out_im);

/**
 * Complete elliptic integral of the third kind `Π(n, m)`.
 */
QdomStatus qdom_carlson_pi(double n, double m, double *out);

/**
 * Bisects for the parameter where the boundary loses univalence.
 */
QdomStatus qdom_find_cusp_parameter(double c, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QDOM_H */
