#ifndef DGZ_GALOIS_H
#define DGZ_GALOIS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every call.
 */
typedef enum DgzStatus {
  DGZ_STATUS_OK = 0,
  DGZ_STATUS_NULL_POINTER = 1,
  DGZ_STATUS_INVALID_ARGUMENT = 2,
  DGZ_STATUS_GUARD_EXCEEDED = 3,
  DGZ_STATUS_PARSE_ERROR = 4,
  DGZ_STATUS_COMPUTATION_FAILED = 5,
  DGZ_STATUS_PANIC = 6,
} DgzStatus;

/**
 * Outcome of a certificate search.
 */
typedef enum DgzVerdict {
  DGZ_VERDICT_POSITIVE = 0,
  DGZ_VERDICT_NEGATIVE = 1,
  DGZ_VERDICT_INCONCLUSIVE = 2,
} DgzVerdict;

/**
 * Opaque curve handle.
 */
typedef struct DgzCurve DgzCurve;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds the curve over `F_q` with working degree `working_degree`
 * (0 selects the default) and stores a new handle in `out`.
 *
 * # Safety
 * `out` must be valid for writing one pointer.
 */
enum DgzStatus dgz_curve_new(uint64_t q, uint32_t working_degree, struct DgzCurve **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `curve` must be null or a handle from [`dgz_curve_new`] not yet freed.
 */
void dgz_curve_free(struct DgzCurve *curve);

/**
 * Degree of the defining polynomial.
 *
 * # Safety
 * `curve` must be a live handle; `out` valid for writing.
 */
enum DgzStatus dgz_curve_degree(const struct DgzCurve *curve, uint32_t *out);

/**
 * Curve artifact as JSON.
 *
 * # Safety
 * `curve` must be a live handle; `out` valid for writing.
 */
enum DgzStatus dgz_curve_to_json(const struct DgzCurve *curve, char **out);

/**
 * Singular-locus and intersection-order checks up to extension degree
 * `ext_bound`; `pass` receives the overall result.
 *
 * # Safety
 * `curve` must be a live handle; `out` and `pass` valid for writing.
 */
enum DgzStatus dgz_verify_facts(const struct DgzCurve *curve,
                                uint32_t ext_bound,
                                char **out,
                                bool *pass);

/**
 * Certificate for the point `a,b,c` with coordinates in `F_{q^subfield}`
 * (see the command-line `--point` syntax).
 *
 * # Safety
 * `curve` must be a live handle, `point` a NUL-terminated string, and
 * `out` and `verdict` valid for writing.
 */
enum DgzStatus dgz_certify(const struct DgzCurve *curve,
                           const char *point,
                           uint32_t subfield,
                           uint64_t seed,
                           char **out,
                           enum DgzVerdict *verdict);

/**
 * Theorem scan; `galois_count` and `pass` receive the summary.
 *
 * # Safety
 * `curve` must be a live handle; the out-parameters valid for writing.
 */
enum DgzStatus dgz_scan(const struct DgzCurve *curve,
                        uint32_t ext_bound,
                        uint32_t samples,
                        uint64_t seed,
                        char **out,
                        uint32_t *galois_count,
                        bool *pass);

/**
 * Releases a string returned by this library; null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void dgz_string_free(char *s);

/**
 * Message for the most recent failure on this thread, or null. Valid until
 * the next failing call on the same thread.
 */
const char *dgz_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DGZ_GALOIS_H */
