#ifndef PARAHORIC_H
#define PARAHORIC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PfStatus {
  PF_STATUS_OK = 0,
  PF_STATUS_NULL_POINTER = 1,
  PF_STATUS_INVALID_ARGUMENT = 2,
  PF_STATUS_PARSE = 3,
  PF_STATUS_UNSUPPORTED = 4,
  PF_STATUS_INTEGRITY = 5,
  PF_STATUS_ARITHMETIC = 6,
  PF_STATUS_IO = 7,
  PF_STATUS_PANIC = 8,
} PfStatus;

/**
 * Opaque session: a root datum, an automorphism and the algebras built on them.
 */
typedef struct PfSession PfSession;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. Valid until the next call.
 */
const char *pf_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void pf_string_free(char *s);

/**
 * Opens a session for `type_tag` (e.g. "A2", "C2.sc") twisted by `theta`
 * ("id", "flip" or a permutation) of degree `r`.
 *
 * # Safety
 * String arguments must be null or NUL-terminated; `out` must be writable.
 */
enum PfStatus pf_session_new(const char *type_tag,
                             const char *theta,
                             size_t r,
                             struct PfSession **out);

/**
 * # Safety
 * `s` must be null or a live session from [`pf_session_new`].
 */
void pf_session_free(struct PfSession *s);

/**
 * Order of the finite Weyl group.
 *
 * # Safety
 * `s` must be a live session and `out` writable.
 */
enum PfStatus pf_weyl_order(const struct PfSession *s, size_t *out);

/**
 * T-basis expansion of `z_μ · 𝕀_J`, one `element<TAB>coefficient` per line.
 * `mu` is comma separated; a null `j` means Iwahori.
 *
 * # Safety
 * `s` live, strings NUL-terminated or null where allowed, `out` writable.
 */
enum PfStatus pf_bernstein_function(const struct PfSession *s,
                                    const char *mu,
                                    const char *j,
                                    char **out);

/**
 * Base change of the orbit sum `z_μ` at `J`, as F-orbit sums.
 *
 * # Safety
 * As for [`pf_bernstein_function`].
 */
enum PfStatus pf_base_change(const struct PfSession *s, const char *mu, const char *j, char **out);

/**
 * Runs a verification suite ("weyl", "hecke", ..., "all") and renders the
 * report as "text", "csv" or "json". `passed` receives the verdict.
 *
 * # Safety
 * `s` live, strings NUL-terminated (format may be null), outputs writable.
 */
enum PfStatus pf_verify(const struct PfSession *s,
                        const char *suite,
                        const char *format,
                        char **out,
                        bool *passed);

/**
 * Library version, static storage.
 */
const char *pf_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PARAHORIC_H */
