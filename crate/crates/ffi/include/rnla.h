#ifndef RNLA_H
#define RNLA_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>

// Result code of every fallible call.
typedef enum RnlaStatus {
  RNLA_STATUS_OK = 0,
  RNLA_STATUS_NULL_POINTER = 1,
  RNLA_STATUS_INVALID_ARGUMENT = 2,
  RNLA_STATUS_DIMENSION_MISMATCH = 3,
  RNLA_STATUS_NON_FINITE = 4,
  // Rank deficiency, degenerate distribution and similar.
  RNLA_STATUS_NUMERICAL = 5,
  RNLA_STATUS_IO = 6,
  RNLA_STATUS_PARSE = 7,
  RNLA_STATUS_BUFFER_TOO_SMALL = 8,
  RNLA_STATUS_PANIC = 9,
} RnlaStatus;

// Sampling distribution for `rnla_rand_matrix_multiply`.
typedef enum RnlaProbKind {
  RNLA_PROB_KIND_OPTIMAL = 0,
  RNLA_PROB_KIND_COLNORM = 1,
  RNLA_PROB_KIND_ROWNORM = 2,
  RNLA_PROB_KIND_UNIFORM = 3,
} RnlaProbKind;

// Opaque dense matrix.
typedef struct RnlaMatrix RnlaMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *rnla_version(void);

// Message for the last failed call on this thread, or NULL after a
// success. Valid until the next call on the same thread.
const char *rnla_last_error_message(void);

// Copies `rows * cols` row-major values into a new matrix.
enum RnlaStatus rnla_matrix_new(size_t rows,
                                size_t cols,
                                const double *data,
                                struct RnlaMatrix **out);

// Releases a handle. NULL is ignored.
void rnla_matrix_free(struct RnlaMatrix *m);

// Row count, or 0 for NULL.
size_t rnla_matrix_rows(const struct RnlaMatrix *m);

// Column count, or 0 for NULL.
size_t rnla_matrix_cols(const struct RnlaMatrix *m);

// Copies the row-major entries into `buf`, which must hold `rows * cols`.
enum RnlaStatus rnla_matrix_copy_data(const struct RnlaMatrix *m, double *buf, size_t len);

enum RnlaStatus rnla_matrix_read(const char *path, struct RnlaMatrix **out);

// Writes MatrixMarket text, or the binary format for a `.bin` path.
enum RnlaStatus rnla_matrix_write(const struct RnlaMatrix *m, const char *path);

// Sampled estimate `CR` of `AB` with `c` draws.
enum RnlaStatus rnla_rand_matrix_multiply(const struct RnlaMatrix *a,
                                          const struct RnlaMatrix *b,
                                          size_t c,
                                          enum RnlaProbKind kind,
                                          uint64_t seed,
                                          struct RnlaMatrix **out);

// Exact minimizer of `|Ax - b|`. `x` must hold `cols(A)` values;
// `residual` may be NULL.
enum RnlaStatus rnla_exact_least_squares(const struct RnlaMatrix *a,
                                         const double *b,
                                         size_t b_len,
                                         double *x,
                                         size_t x_len,
                                         double *residual);

// Sketch-and-solve least squares. `r = 0` selects the theoretical sketch
// size. `residual` may be NULL.
enum RnlaStatus rnla_rand_least_squares(const struct RnlaMatrix *a,
                                        const double *b,
                                        size_t b_len,
                                        double eps,
                                        size_t r,
                                        uint64_t seed,
                                        double *x,
                                        size_t x_len,
                                        double *residual);

// Rank-`k` basis `U~_k` (`rows(A) x k`) from a width-`c` sketch; `c = 0`
// selects the theoretical width. `error_fro` receives `|A - U~U~^T A|_F`
// and may be NULL.
enum RnlaStatus rnla_rand_low_rank(const struct RnlaMatrix *a,
                                   size_t k,
                                   double eps,
                                   size_t c,
                                   uint64_t seed,
                                   struct RnlaMatrix **basis,
                                   double *error_fro);

// Normalized Walsh-Hadamard transform of `n` values (`n` a power of two).
// `x` and `out` may alias.
enum RnlaStatus rnla_fwht(const double *x, double *out, size_t n);

// `ceil(10 d^2 / (beta eps^2))`.
enum RnlaStatus rnla_sample_size_frobenius(size_t d, double beta, double eps, uint64_t *out);

// Theoretical sketch size for least squares on an `n x d` system.
enum RnlaStatus rnla_ls_sample_size(size_t n, size_t d, double eps, uint64_t *out);

// Theoretical sketch width for a rank-`k` approximation with `n` columns.
enum RnlaStatus rnla_lowrank_sample_size(size_t n, size_t k, double eps, double c0, uint64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RNLA_H */
