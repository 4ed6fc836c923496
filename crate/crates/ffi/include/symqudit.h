#ifndef SYMQUDIT_H
#define SYMQUDIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Status codes returned by every fallible function.
 */
typedef enum SqStatus {
  SQ_STATUS_OK = 0,
  SQ_STATUS_NULL_POINTER = 1,
  SQ_STATUS_INVALID_ARGUMENT = 2,
  SQ_STATUS_DIMENSION_MISMATCH = 3,
  SQ_STATUS_NON_FINITE = 4,
  SQ_STATUS_SINGULAR = 5,
  SQ_STATUS_NOT_UNITARY = 6,
  SQ_STATUS_NOT_SYMMETRIC = 7,
  SQ_STATUS_ZERO_STATE = 8,
  SQ_STATUS_NO_CONVERGENCE = 9,
  SQ_STATUS_SCALE_EXCEEDED = 10,
  SQ_STATUS_OVERFLOW = 11,
  SQ_STATUS_PARSE = 12,
  SQ_STATUS_NUMERICAL = 13,
  SQ_STATUS_PANIC = 14,
} SqStatus;

/*
 Opaque dense complex matrix.
 */
typedef struct SqMatrix SqMatrix;

/*
 Opaque permutation-symmetric state.
 */
typedef struct SqState SqState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the most recent failure on this thread. Valid until the next
 failing call; never NULL.
 */
const char *sq_last_error(void);

/*
 Releases a string returned by this library. NULL is ignored.

 # Safety
 `s` must come from this library and not have been freed.
 */
void sq_string_free(char *s);

/*
 Builds a `rows x cols` matrix from `2 * rows * cols` doubles holding
 interleaved real and imaginary parts in row-major order.

 # Safety
 `re_im` must point to `2 * rows * cols` readable doubles; `out` must be
 writable.
 */
enum SqStatus sq_matrix_new(size_t rows, size_t cols, const double *re_im, struct SqMatrix **out);

/*
 # Safety
 `json` must be a NUL-terminated string; `out` must be writable.
 */
enum SqStatus sq_matrix_from_json(const char *json, struct SqMatrix **out);

/*
 # Safety
 `m` must be a live matrix handle; `out` must be writable.
 */
enum SqStatus sq_matrix_to_json(const struct SqMatrix *m, char **out);

/*
 Shape of a matrix.

 # Safety
 `m` must be a live matrix handle; `rows` and `cols` must be writable.
 */
enum SqStatus sq_matrix_shape(const struct SqMatrix *m, size_t *rows, size_t *cols);

/*
 Entry `(i, j)`, zero-based.

 # Safety
 `m` must be a live matrix handle; `re` and `im` must be writable.
 */
enum SqStatus sq_matrix_get(const struct SqMatrix *m, size_t i, size_t j, double *re, double *im);

/*
 Releases a matrix. NULL is ignored.

 # Safety
 `m` must come from this library and not have been freed.
 */
void sq_matrix_free(struct SqMatrix *m);

/*
 Generalized GHZ state. `alpha_re_im` holds `2 d` doubles (interleaved
 real and imaginary parts) or is NULL for equal weights `1/sqrt(d)`.

 # Safety
 `alpha_re_im` must be NULL or point to `2 d` doubles; `out` must be
 writable.
 */
enum SqStatus sq_state_ghz(size_t n, size_t d, const double *alpha_re_im, struct SqState **out);

/*
 Excitation state with `j` excitations.

 # Safety
 `out` must be writable.
 */
enum SqStatus sq_state_excitation(size_t n, size_t d, size_t j, struct SqState **out);

/*
 Unique representative for Jordan blocks of the given sizes.

 # Safety
 `blocks` must point to `count` sizes; `out` must be writable.
 */
enum SqStatus sq_state_unique(size_t n, const size_t *blocks, size_t count, struct SqState **out);

/*
 Excitation `j` spread over blocks with `weights[b]` particles in block `b`.

 # Safety
 `blocks` and `weights` must each point to `count` values; `out` must be
 writable.
 */
enum SqStatus sq_state_multi_block(size_t n,
                                   const size_t *blocks,
                                   const size_t *weights,
                                   size_t count,
                                   size_t j,
                                   struct SqState **out);

/*
 Reads a state file (either representation). Full states must be
 symmetric within `tol`.

 # Safety
 `json` must be a NUL-terminated string; `out` must be writable.
 */
enum SqStatus sq_state_from_json(const char *json, double tol, struct SqState **out);

/*
 # Safety
 `s` must be a live state handle; `out` must be writable.
 */
enum SqStatus sq_state_to_json(const struct SqState *s, char **out);

/*
 Releases a state. NULL is ignored.

 # Safety
 `s` must come from this library and not have been freed.
 */
void sq_state_free(struct SqState *s);

/*
 Dimension of the stabilizer space.

 # Safety
 `s` must be a live state handle; `out` must be writable.
 */
enum SqStatus sq_stabilizer_dimension(const struct SqState *s, double tol, size_t *out);

/*
 Classification report as JSON.

 # Safety
 `s` must be a live state handle; `out` must be writable.
 */
enum SqStatus sq_classify(const struct SqState *s,
                          size_t samples,
                          uint64_t seed,
                          double tol,
                          double cluster_tol,
                          char **out);

/*
 Jordan signature in bracket notation, e.g. `{ { 2 }, { 1 } }`.

 # Safety
 `m` must be a live matrix handle; `out` must be writable.
 */
enum SqStatus sq_jordan_signature(const struct SqMatrix *m,
                                  double tol,
                                  double cluster_tol,
                                  char **out);

/*
 Principal `r`-th root, a polynomial in the input.

 # Safety
 `m` must be a live matrix handle; `out` must be writable.
 */
enum SqStatus sq_nth_root(const struct SqMatrix *m,
                          uint32_t r,
                          double tol,
                          double cluster_tol,
                          struct SqMatrix **out);

/*
 Homogeneous operation for `count` local operations; the result (A, S,
 M, residual, unitary flag) is returned as JSON and `A` optionally as a
 handle through `a_out` (may be NULL).

 # Safety
 `s` must be a live state handle; `ops` must point to `count` live matrix
 handles; `json_out` must be writable; `a_out` must be NULL or writable.
 */
enum SqStatus sq_symmetrize(const struct SqState *s,
                            const struct SqMatrix *const *ops,
                            size_t count,
                            double tol,
                            double cluster_tol,
                            char **json_out,
                            struct SqMatrix **a_out);

/*
 Number of Jordan signatures of dimension `d` and of those with one block
 per eigenvalue. Fails with `OVERFLOW` beyond 64 bits.

 # Safety
 `signatures` and `unique_classes` must be writable.
 */
enum SqStatus sq_count(size_t d, uint64_t *signatures, uint64_t *unique_classes);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SYMQUDIT_H */
