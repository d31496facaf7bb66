/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef MAJORANT_H
#define MAJORANT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define MAJORANT_MODE_EQUALITY 0

#define MAJORANT_MODE_DOMINANCE 1

#define MAJORANT_TAIL_SURVIVOR 0

#define MAJORANT_TAIL_HINGE 1

#define MAJORANT_METHOD_HINGE 0

#define MAJORANT_METHOD_SURVIVOR 1

#define MAJORANT_METHOD_CONVEX_FAMILY 2

/**
 * Result of every fallible call.
 */
typedef enum MajorantStatus {
  MAJORANT_STATUS_OK = 0,
  MAJORANT_STATUS_INVALID_INPUT = 1,
  MAJORANT_STATUS_MAJORIZATION_VIOLATION = 2,
  MAJORANT_STATUS_TRACE_MISMATCH = 3,
  MAJORANT_STATUS_DISTRIBUTION_MISMATCH = 4,
  MAJORANT_STATUS_NULL_POINTER = 5,
  MAJORANT_STATUS_PANIC = 6,
} MajorantStatus;

/**
 * Dense complex `n × n` matrix.
 */
typedef struct MajorantMatrix MajorantMatrix;

/**
 * Compactly supported probability measure (atoms plus uniform pieces).
 */
typedef struct MajorantMeasure MajorantMeasure;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *majorant_last_error(void);

/**
 * Release a string returned by this library.
 *
 * # Safety
 * `s` must come from a `majorant_*` function returning `char *`, or be NULL.
 */
void majorant_string_free(char *s);

/**
 * Prefix-sum majorization of `p` by `lambda`. `first_violation` receives
 * the 1-based length of the first failing prefix, or 0.
 *
 * # Safety
 * Array arguments must be valid for their lengths; outputs must be writable.
 */
enum MajorantStatus majorant_check_majorization(const double *p,
                                                size_t p_len,
                                                const double *lambda,
                                                size_t lambda_len,
                                                uint32_t mode,
                                                double tol,
                                                bool *holds,
                                                size_t *first_violation);

/**
 * Equality-majorant `mu` of `p` below `lambda`; writes `p_len` values.
 *
 * # Safety
 * Array arguments must be valid for their lengths; `mu` must hold `p_len`
 * values.
 */
enum MajorantStatus majorant_reduce_to_equality(const double *p,
                                                size_t p_len,
                                                const double *lambda,
                                                size_t lambda_len,
                                                double *mu);

/**
 * Hermitian `n × n` matrix with spectrum `lambda` and diagonal `p`.
 *
 * # Safety
 * `lambda` and `p` must hold `n` values; `out` must be writable.
 */
enum MajorantStatus majorant_horn_construct(const double *lambda,
                                            const double *p,
                                            size_t n,
                                            struct MajorantMatrix **out);

/**
 * Positive `n × n` matrix with finite-rank spectrum `lambda` and diagonal
 * `p`, both zero-padded to `n`.
 *
 * # Safety
 * Array arguments must be valid for their lengths; `out` must be writable.
 */
enum MajorantStatus majorant_realize_finite_rank(const double *lambda,
                                                 size_t lambda_len,
                                                 const double *p,
                                                 size_t p_len,
                                                 size_t n,
                                                 struct MajorantMatrix **out);

/**
 * Rank-`m` projection in `M_n` with diagonal `p` (in the given order).
 *
 * # Safety
 * `p` must hold `p_len` values; `out` must be writable.
 */
enum MajorantStatus majorant_projection_with_diagonal(const double *p,
                                                      size_t p_len,
                                                      size_t m,
                                                      size_t n,
                                                      struct MajorantMatrix **out);

/**
 * Contraction `L` with `diag(L* A L) = (p, 0, ...)` for positive `a`.
 *
 * # Safety
 * `a` must be a live handle; `p` must hold `p_len` values; `out` must be
 * writable.
 */
enum MajorantStatus majorant_contraction_diagonal(const struct MajorantMatrix *a,
                                                  const double *p,
                                                  size_t p_len,
                                                  struct MajorantMatrix **out);

/**
 * Sum of the `k` largest eigenvalues of a Hermitian matrix.
 *
 * # Safety
 * `a` must be a live handle; `out` must be writable.
 */
enum MajorantStatus majorant_ky_fan_sum(const struct MajorantMatrix *a, size_t k, double *out);

/**
 * Matrix from row-major real and imaginary parts (`im` may be NULL for a
 * real matrix).
 *
 * # Safety
 * `re` (and `im` if non-NULL) must hold `n * n` values; `out` must be
 * writable.
 */
enum MajorantStatus majorant_matrix_from_entries(size_t n,
                                                 const double *re,
                                                 const double *im,
                                                 struct MajorantMatrix **out);

/**
 * Number of rows; 0 for NULL.
 *
 * # Safety
 * `a` must be a live handle or NULL.
 */
size_t majorant_matrix_dim(const struct MajorantMatrix *a);

/**
 * # Safety
 * `a` must be a live handle; outputs must be writable.
 */
enum MajorantStatus majorant_matrix_get(const struct MajorantMatrix *a,
                                        size_t i,
                                        size_t j,
                                        double *re,
                                        double *im);

/**
 * Copy all entries row-major into `re` and `im` (`im` may be NULL).
 *
 * # Safety
 * `a` must be a live handle; `re` (and `im` if non-NULL) must hold
 * `dim * dim` values.
 */
enum MajorantStatus majorant_matrix_copy_entries(const struct MajorantMatrix *a,
                                                 double *re,
                                                 double *im);

/**
 * Decreasing eigenvalues of a Hermitian matrix; writes `dim` values.
 *
 * # Safety
 * `a` must be a live handle; `out` must hold `dim` values.
 */
enum MajorantStatus majorant_matrix_eigenvalues(const struct MajorantMatrix *a, double *out);

/**
 * JSON form `{"dim": n, "entries": [[[re, im], ...], ...]}`; free with
 * [`majorant_string_free`]. NULL on failure.
 *
 * # Safety
 * `a` must be a live handle or NULL.
 */
char *majorant_matrix_to_json(const struct MajorantMatrix *a);

/**
 * # Safety
 * `a` must come from this library and not be freed twice; NULL is ignored.
 */
void majorant_matrix_free(struct MajorantMatrix *a);

/**
 * Measure with atoms `(atom_x[k], atom_mass[k])` and uniform pieces
 * `[piece_a[k], piece_b[k]]` of mass `piece_mass[k]`; total mass 1.
 *
 * # Safety
 * Each array must hold the matching count of values; `out` must be
 * writable.
 */
enum MajorantStatus majorant_measure_new(const double *atom_x,
                                         const double *atom_mass,
                                         size_t n_atoms,
                                         const double *piece_a,
                                         const double *piece_b,
                                         const double *piece_mass,
                                         size_t n_pieces,
                                         struct MajorantMeasure **out);

/**
 * Spectral distribution of a Hermitian matrix under the normalized trace.
 *
 * # Safety
 * `a` must be a live handle; `out` must be writable.
 */
enum MajorantStatus majorant_measure_from_matrix(const struct MajorantMatrix *a,
                                                 struct MajorantMeasure **out);

/**
 * `∫ x^k dm`.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum MajorantStatus majorant_measure_moment(const struct MajorantMeasure *m,
                                            uint32_t k,
                                            double *out);

/**
 * `∫_t^∞ m([s, ∞)) ds` by the survivor or hinge route.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum MajorantStatus majorant_measure_tail(const struct MajorantMeasure *m,
                                          double t,
                                          uint32_t mode,
                                          double *out);

/**
 * Decide `m ⪯ n`.
 *
 * # Safety
 * `m` and `n` must be live handles; `out` must be writable.
 */
enum MajorantStatus majorant_measure_majorize(const struct MajorantMeasure *m,
                                              const struct MajorantMeasure *n,
                                              uint32_t method,
                                              bool *out);

/**
 * Quantile transport onto `cells` equal cells; writes `cells` values.
 *
 * # Safety
 * `m` must be a live handle; `out` must hold `cells` values.
 */
enum MajorantStatus majorant_measure_transport(const struct MajorantMeasure *m,
                                               size_t cells,
                                               double *out);

/**
 * # Safety
 * `m` must come from this library and not be freed twice; NULL is ignored.
 */
void majorant_measure_free(struct MajorantMeasure *m);

/**
 * Distributional Schur check `m_{E(A)} ⪯ m_A` for a Hermitian matrix.
 *
 * # Safety
 * `a` must be a live handle; `out` must be writable.
 */
enum MajorantStatus majorant_schur_distribution_check(const struct MajorantMatrix *a, bool *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MAJORANT_H */
