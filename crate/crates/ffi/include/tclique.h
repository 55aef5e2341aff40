#ifndef TCLIQUE_H
#define TCLIQUE_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Pass as `budget` for an unlimited search.
 */
#define TC_NO_BUDGET UINT64_MAX

typedef enum TcFamily {
  TC_FAMILY_A = 0,
  TC_FAMILY_D = 1,
  TC_FAMILY_U = 2,
} TcFamily;

typedef enum TcStatus {
  TC_STATUS_OK = 0,
  TC_STATUS_NULL_POINTER = 1,
  TC_STATUS_INVALID_ARGUMENT = 2,
  TC_STATUS_PARSE = 3,
  TC_STATUS_SIZE_LIMIT = 4,
  TC_STATUS_BUDGET_EXCEEDED = 5,
  TC_STATUS_IO = 6,
  TC_STATUS_INTERNAL = 7,
  TC_STATUS_PANIC = 8,
} TcStatus;

/**
 * Opaque tournament handle.
 */
typedef struct TcTournament TcTournament;

/**
 * Result of an exact solve. When `exact` is 0 the budget ran out and
 * `lower <= true value <= value`.
 */
typedef struct TcSolveResult {
  size_t value;
  size_t lower;
  bool exact;
  uint64_t nodes;
} TcSolveResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until
 * the next call into this library on the same thread.
 */
const char *tc_last_error(void);

/**
 * Library version as a static string.
 */
const char *tc_version(void);

/**
 * Parses `.trn` text.
 *
 * # Safety
 * `text` must be a nul-terminated string; `out` must be writable.
 */
enum TcStatus tc_tournament_parse(const char *text, struct TcTournament **out);

/**
 * Builds from an `n`×`n` row-major 0/1 matrix.
 *
 * # Safety
 * `cells` must point to `n * n` bytes; `out` must be writable.
 */
enum TcStatus tc_tournament_from_matrix(size_t n, const uint8_t *cells, struct TcTournament **out);

/**
 * Member `n` of a family.
 *
 * # Safety
 * `out` must be writable.
 */
enum TcStatus tc_tournament_build(enum TcFamily family, size_t n, struct TcTournament **out);

/**
 * Uniformly random tournament from a seed.
 *
 * # Safety
 * `out` must be writable.
 */
enum TcStatus tc_tournament_random(size_t n, uint64_t seed, struct TcTournament **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `t` must come from this library and not be used afterwards.
 */
void tc_tournament_free(struct TcTournament *t);

/**
 * Number of vertices; 0 for null.
 *
 * # Safety
 * `t` must be a live handle or null.
 */
size_t tc_tournament_n(const struct TcTournament *t);

/**
 * 1 if `u -> v`, 0 if `v -> u`, -1 for null, equal or out-of-range vertices.
 *
 * # Safety
 * `t` must be a live handle or null.
 */
int32_t tc_tournament_arc(const struct TcTournament *t, size_t u, size_t v);

/**
 * `.trn` text of the tournament.
 *
 * # Safety
 * `t` must be a live handle; `out` must be writable.
 */
enum TcStatus tc_tournament_format(const struct TcTournament *t, char **out);

/**
 * Hex canonical code (at most 16 vertices).
 *
 * # Safety
 * `t` must be a live handle; `out` must be writable.
 */
enum TcStatus tc_canonical_code(const struct TcTournament *t, char **out);

/**
 * Releases a string returned by this library; null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void tc_string_free(char *s);

/**
 * Exact clique number. If `order` is non-null and `order_len >= n`, an
 * optimal (or, when inexact, the best known) ordering is written there.
 *
 * # Safety
 * `t` must be a live handle; `out` writable; `order` null or writable for
 * `order_len` entries.
 */
enum TcStatus tc_omega(const struct TcTournament *t,
                       uint64_t budget,
                       struct TcSolveResult *out,
                       size_t *order,
                       size_t order_len);

/**
 * Exact dichromatic number. If `colour` is non-null and `colour_len >= n`,
 * the class index of every vertex is written there.
 *
 * # Safety
 * As for [`tc_omega`].
 */
enum TcStatus tc_chi(const struct TcTournament *t,
                     uint64_t budget,
                     struct TcSolveResult *out,
                     size_t *colour,
                     size_t colour_len);

/**
 * Induced copy of `pattern` in `host`. Sets `*found`; when found and `map`
 * has room for the pattern's vertices, writes the host vertex of each.
 *
 * # Safety
 * Handles live; `found` writable; `map` null or writable for `map_len`.
 */
enum TcStatus tc_contains(const struct TcTournament *host,
                          const struct TcTournament *pattern,
                          bool *found,
                          size_t *map,
                          size_t map_len);

/**
 * Largest `n` with `A_n` (or `D_n`) contained in the tournament.
 *
 * # Safety
 * `t` live; `out` writable.
 */
enum TcStatus tc_family_index(const struct TcTournament *t, enum TcFamily family, size_t *out);

/**
 * Decimal (or symbolic, when not materializable) value of `f(t)`.
 *
 * # Safety
 * `out` writable.
 */
enum TcStatus tc_bound_f(size_t t, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TCLIQUE_H */
