/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef GEGENPSD_H
#define GEGENPSD_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GpStatus {
  GP_STATUS_OK = 0,
  GP_STATUS_NULL_POINTER = 1,
  GP_STATUS_INVALID_ARGUMENT = 2,
  GP_STATUS_DIMENSION_MISMATCH = 3,
  GP_STATUS_INFEASIBLE = 4,
  GP_STATUS_CERTIFICATE_REJECTED = 5,
  GP_STATUS_LP_FAILED = 6,
  GP_STATUS_PARSE = 7,
  GP_STATUS_UNKNOWN_CODE = 8,
  GP_STATUS_BUFFER_TOO_SMALL = 9,
  GP_STATUS_PANIC = 10,
} GpStatus;

/**
 * Symmetric matrix handle.
 */
typedef struct GpMatrix GpMatrix;

/**
 * Feasible pair `(T, U)` handle.
 */
typedef struct GpPair GpPair;

/**
 * Point configuration handle.
 */
typedef struct GpPoints GpPoints;

/**
 * Summary of an eigenvalue check.
 */
typedef struct GpPsdResult {
  bool is_psd;
  double min_eigenvalue;
  double matrix_scale;
} GpPsdResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *gp_version(void);

/**
 * Message for the last failed call on this thread, or NULL. Valid until the
 * next call into the library from the same thread.
 */
const char *gp_last_error(void);

/**
 * `G_k^{(n)}(t)`.
 *
 * # Safety
 * `result` must be valid for writes.
 */
enum GpStatus gp_gegenbauer_eval(uint32_t n, uint32_t k, double t, double *result);

/**
 * `G_k^{(n,m)}(t, u, v)` with `u`, `v` of length `m`.
 *
 * # Safety
 * `u` and `v` must point to `m` doubles; `result` must be valid for writes.
 */
enum GpStatus gp_gegenbauer_eval_mv(uint32_t n,
                                    uint32_t k,
                                    double t,
                                    const double *u,
                                    const double *v,
                                    size_t m,
                                    double *result);

/**
 * Matrix from `dim * dim` row-major entries; the upper triangle is used.
 *
 * # Safety
 * `data` must point to `dim * dim` doubles; `matrix` must be valid for writes.
 */
enum GpStatus gp_matrix_new(size_t dim, const double *data, struct GpMatrix **matrix);

/**
 * # Safety
 * `matrix` must be NULL or a handle from this library not yet freed.
 */
void gp_matrix_free(struct GpMatrix *matrix);

/**
 * # Safety
 * `matrix` must be a live handle; `dim` must be valid for writes.
 */
enum GpStatus gp_matrix_dim(const struct GpMatrix *matrix, size_t *dim);

/**
 * # Safety
 * `matrix` must be a live handle; `value` must be valid for writes.
 */
enum GpStatus gp_matrix_get(const struct GpMatrix *matrix, size_t i, size_t j, double *value);

/**
 * Copy all entries row-major into `data`, which holds `capacity` doubles.
 *
 * # Safety
 * `matrix` must be a live handle; `data` must be valid for `capacity` writes.
 */
enum GpStatus gp_matrix_copy(const struct GpMatrix *matrix, double *data, size_t capacity);

/**
 * Eigenvalue check with threshold `-tol * max(|lambda|_max, 1)`.
 *
 * # Safety
 * `matrix` must be a live handle; `result` must be valid for writes.
 */
enum GpStatus gp_matrix_is_psd(const struct GpMatrix *matrix,
                               double tol,
                               struct GpPsdResult *result);

/**
 * `r` points of `S^{n-1}` from `r * n` row-major coordinates. With
 * `normalize` set, each point is scaled to unit length first.
 *
 * # Safety
 * `data` must point to `r * n` doubles; `points` must be valid for writes.
 */
enum GpStatus gp_points_new(size_t n,
                            size_t r,
                            const double *data,
                            bool normalize,
                            struct GpPoints **points);

/**
 * `simplex(n)`, `cross_polytope(n)` or `icosahedron`.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `points` must be valid for writes.
 */
enum GpStatus gp_points_named(const char *name, struct GpPoints **points);

/**
 * `r` uniform points on `S^{n-1}` from the seeded stream.
 *
 * # Safety
 * `points` must be valid for writes.
 */
enum GpStatus gp_points_sample(size_t n, size_t r, uint64_t seed, struct GpPoints **points);

/**
 * # Safety
 * `points` must be NULL or a handle from this library not yet freed.
 */
void gp_points_free(struct GpPoints *points);

/**
 * # Safety
 * `points` must be a live handle; `n` and `r` must be valid for writes.
 */
enum GpStatus gp_points_shape(const struct GpPoints *points, size_t *n, size_t *r);

/**
 * `(G_k^{(n,m)}(<p_i,p_j>, p_i^(m), p_j^(m)))`.
 *
 * # Safety
 * `points` must be a live handle; `matrix` must be valid for writes.
 */
enum GpStatus gp_kernel_matrix(const struct GpPoints *points,
                               uint32_t m,
                               uint32_t k,
                               struct GpMatrix **matrix);

/**
 * Pair from `T` (`r * r` row-major) and `U` (`r * (n - 1)` row-major).
 *
 * # Safety
 * `t` and `u` must hold the stated number of doubles; `pair` must be valid
 * for writes.
 */
enum GpStatus gp_pair_new(size_t n,
                          size_t r,
                          const double *t,
                          const double *u,
                          struct GpPair **pair);

/**
 * Pair realized by a point configuration.
 *
 * # Safety
 * `points` must be a live handle; `pair` must be valid for writes.
 */
enum GpStatus gp_pair_from_points(const struct GpPoints *points, struct GpPair **pair);

/**
 * # Safety
 * `pair` must be NULL or a handle from this library not yet freed.
 */
void gp_pair_free(struct GpPair *pair);

/**
 * Membership of the pair in level `m` for degrees `1..=d`.
 *
 * # Safety
 * `pair` must be a live handle; `member` must be valid for writes.
 */
enum GpStatus gp_pair_lambda_member(const struct GpPair *pair,
                                    size_t m,
                                    uint32_t d,
                                    double tol,
                                    bool *member);

/**
 * # Safety
 * `pair` must be a live handle; `member` must be valid for writes.
 */
enum GpStatus gp_pair_delta_member(const struct GpPair *pair, double tol, bool *member);

/**
 * Bound `f(1) / f_0` for the polynomial with monomial coefficients
 * `coeffs[0..len]`, after verifying the certificate.
 *
 * # Safety
 * `coeffs` must point to `len` doubles; `bound` must be valid for writes.
 */
enum GpStatus gp_delsarte_bound(const double *coeffs,
                                size_t len,
                                uint32_t n,
                                double theta,
                                double *bound);

/**
 * Best certificate of the given degree found by the linear program. The
 * Gegenbauer coefficients `f_0..f_degree` are written to `coeffs` when it
 * is not NULL, which then must hold `degree + 1` doubles.
 *
 * # Safety
 * `bound` must be valid for writes; `coeffs` is NULL or valid for
 * `degree + 1` writes.
 */
enum GpStatus gp_delsarte_lp(uint32_t n,
                             double theta,
                             uint32_t degree,
                             size_t grid,
                             double *bound,
                             double *coeffs);

/**
 * `q_omega(N)` for the pattern with block sizes `parts[0..len]`.
 *
 * # Safety
 * `parts` must point to `len` integers; `count` must be valid for writes.
 */
enum GpStatus gp_q_omega(const uint32_t *parts, size_t len, uint64_t big_n, uint64_t *count);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GEGENPSD_H */
