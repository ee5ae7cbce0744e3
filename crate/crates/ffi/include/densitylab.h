#ifndef DENSITYLAB_H
#define DENSITYLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes; the non-zero values match the command-line exit codes where
 * both exist.
 */
typedef enum {
  DL_STATUS_OK = 0,
  DL_STATUS_VALIDATION = 2,
  DL_STATUS_EXHAUSTED = 3,
  DL_STATUS_CAPACITY = 4,
  DL_STATUS_DOMAIN = 5,
  DL_STATUS_IO = 6,
  DL_STATUS_NULL_POINTER = 7,
  DL_STATUS_PANIC = 8,
} DlStatus;

/**
 * Opaque set handle.
 */
typedef struct DlSet DlSet;

/**
 * Gap witness for a product set window `[lo, hi] = [x, n x]`.
 */
typedef struct {
  uint64_t n;
  uint64_t x;
  uint64_t m;
  uint64_t products;
  uint64_t lo;
  uint64_t hi;
} DlGapReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *dl_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *dl_version(void);

/**
 * Parses a set from a JSON document (`{"kind": ..., "params": ...}`) or
 * shorthand such as `squarefree` or `intervals:2-4,65-130`.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
DlStatus dl_set_parse(const char *text, DlSet **out);

/**
 * Builds an interval-union set from `n_pairs` `[a, b]` pairs stored flat.
 *
 * # Safety
 * `pairs` must point to `2 * n_pairs` readable values; `out` must be valid.
 */
DlStatus dl_set_from_intervals(const uint64_t *pairs, size_t n_pairs, DlSet **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `set` must come from this library and not be used afterwards.
 */
void dl_set_free(DlSet *set);

/**
 * # Safety
 * Pointers must be valid.
 */
DlStatus dl_set_contains(const DlSet *set, uint64_t x, bool *out);

/**
 * Writes the members of `[lo, hi]` into `buf`. `*len` receives the member
 * count; if it exceeds `cap` nothing is written and the status is
 * `Capacity`.
 *
 * # Safety
 * `buf` must have room for `cap` values (may be null when `cap == 0`).
 */
DlStatus dl_set_materialize(const DlSet *set,
                            uint64_t lo,
                            uint64_t hi,
                            uint64_t *buf,
                            size_t cap,
                            size_t *len);

/**
 * `|A ∩ [1, n]| / n`.
 *
 * # Safety
 * Pointers must be valid.
 */
DlStatus dl_counting_density(const DlSet *set, uint64_t n, double *out);

/**
 * `(sum_{x in A, x <= n} 1/x) / ln n`.
 *
 * # Safety
 * Pointers must be valid.
 */
DlStatus dl_log_density(const DlSet *set, uint64_t n, double *out);

/**
 * Largest reciprocal sum over windows `[k, k n)` with `k n <= H + 1`.
 *
 * # Safety
 * Pointers must be valid; `k_star` may be null.
 */
DlStatus dl_banach_window_sup(const DlSet *set,
                              uint64_t n,
                              uint64_t horizon,
                              double *value,
                              uint64_t *k_star);

/**
 * Grid minimum of the window supremum over `ln n`, for `n <= n_max`.
 *
 * # Safety
 * Pointers must be valid.
 */
DlStatus dl_lbd_estimate(const DlSet *set, uint64_t n_max, uint64_t horizon, double *out);

/**
 * Densest window `[k, k + n]` below the horizon, as a fraction of `n + 1`.
 *
 * # Safety
 * Pointers must be valid; `k_star` may be null.
 */
DlStatus dl_bd_estimate(const DlSet *set,
                        uint64_t n,
                        uint64_t horizon,
                        double *value,
                        uint64_t *k_star);

/**
 * Root-weighted window supremum with exponent `m`.
 *
 * # Safety
 * Pointers must be valid; `k_star` may be null.
 */
DlStatus dl_bdm_window_sup(const DlSet *set,
                           uint32_t m,
                           uint64_t n,
                           uint64_t horizon,
                           double *value,
                           uint64_t *k_star);

/**
 * Harmonic measure of an explicit or interval set in the window
 * `[k, span k]`.
 *
 * # Safety
 * Pointers must be valid; `error_bound` may be null.
 */
DlStatus dl_nu(const DlSet *set, uint64_t k, uint64_t span, double *value, double *error_bound);

/**
 * `*certified` is true iff no `a < b <= H` in the set has `b^2 / a` in it.
 *
 * # Safety
 * Pointers must be valid.
 */
DlStatus dl_gp_free_certify(const DlSet *set, uint64_t horizon, bool *certified);

/**
 * Least `(a, r)` of an n-approximate geometric progression of length `l`.
 * Returns `Exhausted` when the search finds nothing.
 *
 * # Safety
 * Pointers must be valid.
 */
DlStatus dl_find_geo(const DlSet *set,
                     uint32_t l,
                     uint64_t n,
                     uint64_t min_a,
                     uint64_t min_r,
                     uint64_t horizon,
                     uint64_t *a,
                     uint64_t *r);

/**
 * Minimal-gap window for `A·B` and `n`; `Exhausted` when no window holds a
 * product.
 *
 * # Safety
 * Pointers must be valid.
 */
DlStatus dl_gap_witness(const DlSet *a,
                        const DlSet *b,
                        uint64_t n,
                        uint64_t horizon,
                        DlGapReport *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DENSITYLAB_H */
