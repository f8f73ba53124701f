#ifndef WEYLKIT_H
#define WEYLKIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define WK_OK 0

#define WK_ERR_NULL -1

#define WK_ERR_INVALID_ARGUMENT -2

#define WK_ERR_CAP_EXCEEDED -3

#define WK_ERR_PRECONDITION -4

#define WK_ERR_NO_WITNESS -5

#define WK_ERR_INADMISSIBLE -6

#define WK_ERR_UTF8 -7

#define WK_ERR_JSON -8

#define WK_ERR_PANIC -9

typedef enum WkSuite {
  WK_SUITE_RELATIONS = 0,
  WK_SUITE_REL_WEYL = 1,
  WK_SUITE_EXTEND = 2,
  WK_SUITE_SHADOWS = 3,
  WK_SUITE_TABLE1 = 4,
  WK_SUITE_ALL = 5,
} WkSuite;

/**
 * Orbit decomposition of a normalized standard Levi datum.
 */
typedef struct WkDecomposition WkDecomposition;

/**
 * A validated cuspidal shadow.
 */
typedef struct WkShadow WkShadow;

/**
 * Orders of the relative Weyl groups of a shadow.
 */
typedef struct WkRelWeylOrders {
  uint64_t w_hat;
  uint64_t w_tilde;
  uint64_t w_lambda;
  uint64_t k_lambda;
  /**
   * whether `W(λ̃)` has index two in `W(λ)`
   */
  bool index_two;
} WkRelWeylOrders;

/**
 * Message for the most recent failure on this thread, or an empty string.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *wk_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *wk_version(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void wk_string_free(char *s);

/**
 * Normalizes the Levi datum given by 1-based simple root indices and
 * decomposes it. `swapped` (optional) receives whether the graph
 * automorphism was applied.
 *
 * # Safety
 * `delta` must point to `len` readable values (or be null with `len == 0`);
 * `out` must be writable.
 */
int32_t wk_decompose(size_t rank,
                     const size_t *delta,
                     size_t len,
                     struct WkDecomposition **out,
                     bool *swapped);

/**
 * # Safety
 * `h` must be a live handle and `out` writable.
 */
int32_t wk_decomposition_orbit_count(const struct WkDecomposition *h, size_t *out);

/**
 * Writes the decomposition as JSON; free with [`wk_string_free`].
 *
 * # Safety
 * `h` must be a live handle and `out` writable.
 */
int32_t wk_decomposition_to_json(const struct WkDecomposition *h, char **out);

/**
 * # Safety
 * `h` must come from [`wk_decompose`] and not have been freed. Null is ignored.
 */
void wk_decomposition_free(struct WkDecomposition *h);

/**
 * Parses and validates a shadow. Inadmissible input fails with
 * `WK_ERR_INADMISSIBLE` and the violated axioms in [`wk_last_error`].
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` writable.
 */
int32_t wk_shadow_from_json(const char *json, struct WkShadow **out);

/**
 * Writes the shadow in canonical JSON form; free with [`wk_string_free`].
 *
 * # Safety
 * `h` must be a live handle and `out` writable.
 */
int32_t wk_shadow_to_json(const struct WkShadow *h, char **out);

/**
 * # Safety
 * `h` must be a live handle and `out` writable.
 */
int32_t wk_shadow_rel_weyl_orders(const struct WkShadow *h, struct WkRelWeylOrders *out);

/**
 * # Safety
 * `h` must come from [`wk_shadow_from_json`] and not have been freed. Null is ignored.
 */
void wk_shadow_free(struct WkShadow *h);

/**
 * Runs a verification suite and writes its JSON report. `passed` receives
 * whether every record passed; a failing suite still returns `WK_OK`.
 *
 * # Safety
 * `out` and `passed` must be writable.
 */
int32_t wk_verify(enum WkSuite suite, size_t rank, uint64_t seed, char **out, bool *passed);

#endif  /* WEYLKIT_H */
