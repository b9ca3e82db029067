#ifndef EBC_H
#define EBC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes for every fallible call.
 */
typedef enum EbcStatus {
  EbcOk = 0,
  /**
   * Null pointer, unparsable string, or malformed request.
   */
  EbcInvalidArgument = 1,
  /**
   * Mathematically undefined or out-of-domain request.
   */
  EbcDomainError = 2,
  /**
   * The precision cannot support the requested relation height.
   */
  EbcInsufficientPrecision = 3,
  /**
   * Internal cross-check failure.
   */
  EbcInternalError = 4,
} EbcStatus;

/**
 * Opaque evaluation context: precision plus cache policy.
 */
typedef struct EbcContext EbcContext;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version string (static storage; do not free).
 */
const char *ebc_version(void);

/**
 * Last error message on this thread, or null. Valid until the next failing
 * call on the same thread; do not free.
 */
const char *ebc_last_error(void);

/**
 * Creates a context with the given decimal precision (>= 10) and the
 * persistent cache disabled. Returns null on invalid precision.
 */
struct EbcContext *ebc_context_new(uint32_t digits);

/**
 * Like [`ebc_context_new`] but with the persistent digit cache enabled at
 * `cache_dir` (pass null for the platform default location).
 *
 * # Safety
 * `cache_dir` must be null or a valid NUL-terminated string.
 */
struct EbcContext *ebc_context_new_cached(uint32_t digits, const char *cache_dir);

/**
 * Frees a context. Null is ignored.
 *
 * # Safety
 * `ctx` must be null or a pointer returned by a context constructor, freed
 * at most once.
 */
void ebc_context_free(struct EbcContext *ctx);

/**
 * Frees a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string returned by this library, freed at most once.
 */
void ebc_string_free(char *s);

/**
 * Euler's constant gamma as a decimal string.
 *
 * # Safety
 * `ctx` and `out` must be valid pointers.
 */
enum EbcStatus ebc_euler_gamma(const struct EbcContext *ctx, char **out);

/**
 * Pi as a decimal string.
 *
 * # Safety
 * `ctx` and `out` must be valid pointers.
 */
enum EbcStatus ebc_pi(const struct EbcContext *ctx, char **out);

/**
 * gamma(Omega, a, q) through the closed form. `omega_csv` is a
 * comma-separated prime list ("" for the empty set).
 *
 * # Safety
 * Pointer arguments must be valid; `omega_csv` NUL-terminated.
 */
enum EbcStatus ebc_compute(const struct EbcContext *ctx,
                           const char *omega_csv,
                           uint64_t a,
                           uint64_t q,
                           char **out);

/**
 * gamma(Omega, a, q) by the defining limit (any residue class). Writes the
 * value and the digits it is guaranteed to.
 *
 * # Safety
 * Pointer arguments must be valid; `omega_csv` NUL-terminated.
 */
enum EbcStatus ebc_oracle(const struct EbcContext *ctx,
                          const char *omega_csv,
                          uint64_t a,
                          uint64_t q,
                          char **out,
                          uint32_t *achieved_digits);

/**
 * L(1, chi) for the character of the given enumeration index mod q.
 * `use_series` selects the series oracle route instead of the digamma
 * closed form. Real and imaginary parts as decimal strings.
 *
 * # Safety
 * Pointer arguments must be valid.
 */
enum EbcStatus ebc_l_value(const struct EbcContext *ctx,
                           uint64_t q,
                           uint64_t chi_index,
                           int32_t use_series,
                           char **out_re,
                           char **out_im);

/**
 * Verifies one of the named identities (closed_form_vs_oracle,
 * diamond_ford, qq_identity) and reports pass/fail plus |lhs - rhs|.
 *
 * # Safety
 * Pointer arguments must be valid; strings NUL-terminated.
 */
enum EbcStatus ebc_verify(const struct EbcContext *ctx,
                          const char *identity,
                          const char *omega_csv,
                          uint64_t a,
                          uint64_t q,
                          int32_t *pass,
                          char **abs_diff_out);

/**
 * PSLQ over `n` decimal-string values. On success writes `found` (0/1) and,
 * when found, the coefficient vector into `coeffs` (length `n`).
 *
 * # Safety
 * `values` must point to `n` valid NUL-terminated strings; `coeffs` must
 * have room for `n` entries.
 */
enum EbcStatus ebc_find_relation(const struct EbcContext *ctx,
                                 const char *const *values,
                                 uintptr_t n,
                                 uint64_t height,
                                 int64_t *coeffs,
                                 int32_t *found);

/**
 * Irreducibility of a '|'-separated family, of prime sets ("2|3|2,3") or,
 * with `naturals != 0`, of positive integers ("6|10|15"). Writes the verdict
 * and a witness description.
 *
 * # Safety
 * Pointer arguments must be valid; `family` NUL-terminated.
 */
enum EbcStatus ebc_irreducible(const char *family,
                               int32_t naturals,
                               int32_t *result,
                               char **witness_out);

/**
 * Generic escape hatch: run any CLI-style job and return the JSON document.
 * `command` is one of compute|lvalue|chars|verify|pslq|probe|irreducible;
 * `params_json` is a flat JSON object of string parameters, or null.
 *
 * # Safety
 * Pointer arguments must be valid; strings NUL-terminated.
 */
enum EbcStatus ebc_run_json(const struct EbcContext *ctx,
                            const char *command,
                            const char *params_json,
                            char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EBC_H */
