/* C interface to the z2embed mod-2 embeddability engine. */

#ifndef Z2EMBED_H
#define Z2EMBED_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code of every call.
 */
typedef enum Z2Status {
  Z2_STATUS_OK = 0,
  Z2_STATUS_NULL_POINTER = 1,
  Z2_STATUS_PARSE_ERROR = 2,
  Z2_STATUS_INVALID_ARGUMENT = 3,
  Z2_STATUS_INTERNAL_ERROR = 4,
} Z2Status;

/**
 * Decision outcome of `z2_decide`.
 */
typedef enum Z2Verdict {
  Z2_VERDICT_YES = 0,
  Z2_VERDICT_NO = 1,
  Z2_VERDICT_UNKNOWN = 2,
} Z2Verdict;

/**
 * Opaque handle to a parsed complex.
 */
typedef struct Z2Complex Z2Complex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the most recent error on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *z2_last_error_message(void);

/**
 * Parses a complex descriptor (`join:3,3`, `Kn:5`, `K5`, `K33`,
 * `tildeK:4`) into an opaque handle.
 *
 * # Safety
 * `desc` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum Z2Status z2_complex_parse(const char *desc, struct Z2Complex **out);

/**
 * Releases a complex handle. Null is ignored.
 *
 * # Safety
 * `handle` must come from `z2_complex_parse` and not be used afterwards.
 */
void z2_complex_free(struct Z2Complex *handle);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from a function of this library and not be used afterwards.
 */
void z2_string_free(char *s);

/**
 * Basic counts of the complex as a JSON string.
 *
 * # Safety
 * `handle` and `out_json` must be valid pointers.
 */
enum Z2Status z2_complex_info_json(const struct Z2Complex *handle, char **out_json);

/**
 * Dimensions of the full and swap-invariant cycle spaces of the deleted
 * product; join complexes only.
 *
 * # Safety
 * All pointers must be valid.
 */
enum Z2Status z2_dims(const struct Z2Complex *handle, uintptr_t *full, uintptr_t *symmetric);

/**
 * Decides mod-2 embeddability into a manifold whose intersection form has
 * kind `'I'` or `'H'` and rank `beta`. On a yes verdict the certificate is
 * returned as JSON in `out_cert_json` (else it is set to null).
 *
 * # Safety
 * `handle` and `out_verdict` must be valid; `out_cert_json` may be null if
 * the certificate is not wanted.
 */
enum Z2Status z2_decide(const struct Z2Complex *handle,
                        char omega_kind,
                        uintptr_t beta,
                        uint64_t seed,
                        uintptr_t exhaustive_threshold,
                        uintptr_t restarts,
                        enum Z2Verdict *out_verdict,
                        char **out_cert_json);

/**
 * Re-verifies a certificate JSON document from scratch; `out_ok` receives
 * 1 when the certificate is valid and 0 otherwise.
 *
 * # Safety
 * `cert_json` must be a valid NUL-terminated string, `out_ok` valid.
 */
enum Z2Status z2_verify_certificate(const char *cert_json, int32_t *out_ok);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* Z2EMBED_H */
