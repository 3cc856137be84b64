#ifndef BARGMANN_H
#define BARGMANN_H

/* Generated by cbindgen from crates/ffi/src. Do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum BgStatus {
  BG_STATUS_OK = 0,
  BG_STATUS_NULL_POINTER = 1,
  BG_STATUS_DIMENSION = 2,
  BG_STATUS_INPUT = 3,
  BG_STATUS_PRECONDITION = 4,
  BG_STATUS_RANGE = 5,
  BG_STATUS_RESOURCE = 6,
  BG_STATUS_UNBOUNDED = 7,
  BG_STATUS_INCONCLUSIVE = 8,
  BG_STATUS_CROSS_CHECK = 9,
  /**
   * A buffer was too short; the required length was written.
   */
  BG_STATUS_BUFFER_TOO_SMALL = 10,
  BG_STATUS_PANIC = 11,
} BgStatus;

/**
 * Opaque result of [`bg_composition_norm`].
 */
typedef struct BgCertificate BgCertificate;

/**
 * Opaque affine map `z ↦ Az + b`.
 */
typedef struct BgMap BgMap;

typedef struct BgTolerances {
  double rank_tol;
  double psd_tol;
  double boundary_tol;
} BgTolerances;

typedef struct BgStructure {
  bool compact;
  bool normal;
  bool isometric;
  bool coisometric;
  bool unitary;
} BgStructure;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *bg_last_error_message(void);

/**
 * Static description of a status code.
 */
const char *bg_status_string(enum BgStatus status);

const char *bg_version(void);

/**
 * Default tolerances for dimension `n`.
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum BgStatus bg_tolerances_default(size_t n, struct BgTolerances *out);

/**
 * Create a map from `a` (`2n²` doubles, row-major, interleaved) and `b`
 * (`2n` doubles).
 *
 * # Safety
 * `a` and `b` must point to that many readable doubles; `out` must be
 * null or valid for writes.
 */
enum BgStatus bg_map_new(size_t n, const double *a, const double *b, struct BgMap **out);

/**
 * `outer ∘ inner`.
 *
 * # Safety
 * Handles must be null or live; `out` must be null or valid for writes.
 */
enum BgStatus bg_map_compose(const struct BgMap *outer,
                             const struct BgMap *inner,
                             struct BgMap **out);

/**
 * Dimension of the map, 0 for a null handle.
 *
 * # Safety
 * `map` must be null or live.
 */
size_t bg_map_dim(const struct BgMap *map);

/**
 * # Safety
 * `map` must be null or a handle from this library not yet freed.
 */
void bg_map_free(struct BgMap *map);

/**
 * Boundedness verdict and closed-form norm. `tol` may be null for the
 * defaults. An unbounded operator is a successful call; query
 * [`bg_certificate_bounded`].
 *
 * # Safety
 * `map` and `tol` must be null or live; `out` must be null or valid for writes.
 */
enum BgStatus bg_composition_norm(const struct BgMap *map,
                                  const struct BgTolerances *tol,
                                  struct BgCertificate **out);

/**
 * # Safety
 * `cert` must be null or a handle from this library not yet freed.
 */
void bg_certificate_free(struct BgCertificate *cert);

/**
 * # Safety
 * `cert` must be null or live.
 */
bool bg_certificate_bounded(const struct BgCertificate *cert);

/**
 * `‖C_φ‖`; `BG_STATUS_UNBOUNDED` when there is none.
 *
 * # Safety
 * `cert` must be null or live; `out` must be null or valid for writes.
 */
enum BgStatus bg_certificate_norm(const struct BgCertificate *cert, double *out);

/**
 * `‖A‖`.
 *
 * # Safety
 * As for [`bg_certificate_norm`].
 */
enum BgStatus bg_certificate_a_norm(const struct BgCertificate *cert, double *out);

/**
 * Residual of the range-membership test; unavailable when `‖A‖ > 1`.
 *
 * # Safety
 * As for [`bg_certificate_norm`].
 */
enum BgStatus bg_certificate_membership_residual(const struct BgCertificate *cert, double *out);

/**
 * Minimal-norm vector `v` as interleaved doubles. `*len` holds the buffer
 * capacity in doubles on entry and the number written (or required) on
 * return.
 *
 * # Safety
 * `buf` must be null or valid for `*len` writes; `len` must be valid.
 */
enum BgStatus bg_certificate_v(const struct BgCertificate *cert, double *buf, size_t *len);

/**
 * Extremal point `w₀`, same buffer protocol as [`bg_certificate_v`].
 *
 * # Safety
 * As for [`bg_certificate_v`].
 */
enum BgStatus bg_certificate_w0(const struct BgCertificate *cert, double *buf, size_t *len);

/**
 * Compact / normal / isometric / co-isometric / unitary verdicts.
 *
 * # Safety
 * `map` and `tol` must be null or live; `out` must be null or valid for writes.
 */
enum BgStatus bg_classify_structure(const struct BgMap *map,
                                    const struct BgTolerances *tol,
                                    struct BgStructure *out);

/**
 * Norm of `C_φ` restricted to polynomials of degree `≤ degree`.
 *
 * # Safety
 * `map` must be null or live; `out` must be null or valid for writes.
 */
enum BgStatus bg_truncated_norm(const struct BgMap *map, size_t degree, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BARGMANN_H */
