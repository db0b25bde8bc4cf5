#ifndef EXCISIONLAB_H
#define EXCISIONLAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ExlStatus {
  EXL_STATUS_OK = 0,
  EXL_STATUS_NULL_POINTER = 1,
  EXL_STATUS_INVALID_UTF8 = 2,
  EXL_STATUS_PARSE = 3,
  EXL_STATUS_INVALID_INPUT = 4,
  EXL_STATUS_NO_LOCAL_UNIT = 5,
  EXL_STATUS_NOT_A_CYCLE = 6,
  EXL_STATUS_UNSOLVABLE = 7,
  EXL_STATUS_CERTIFICATE_REJECTED = 8,
  EXL_STATUS_DEGREE_TOO_LARGE = 9,
  EXL_STATUS_PANIC = 10,
  EXL_STATUS_OTHER = 11,
} ExlStatus;

// Opaque algebra-with-ideal handle.
typedef struct ExlExtension ExlExtension;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses an algebra document. On success `*out` owns a new handle that
// must be released with [`exl_extension_free`].
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum ExlStatus exl_extension_from_json(const char *json, struct ExlExtension **out);

// Builds one of the named demo extensions (`t2-corner`, `matrix2`, `direct-sum`).
//
// # Safety
// `name` must be a NUL-terminated string and `out` a valid pointer.
enum ExlStatus exl_extension_demo(const char *name, struct ExlExtension **out);

// # Safety
// `ext` must be null or a handle returned by this library, not yet freed.
void exl_extension_free(struct ExlExtension *ext);

// Dimension of the algebra and of the ideal.
//
// # Safety
// `ext` must be a live handle; the output pointers must be valid.
enum ExlStatus exl_extension_dimensions(const struct ExlExtension *ext,
                                        uintptr_t *dim,
                                        uintptr_t *ideal_dim);

// Dimension of `H_degree` for `complex` in `hh`, `hc`, `bar` and `space` in
// `A`, `I`, `relative`.
//
// # Safety
// `ext` must be a live handle, the strings NUL-terminated, `out` valid.
enum ExlStatus exl_homology_dimension(const struct ExlExtension *ext,
                                      const char *complex,
                                      const char *space,
                                      uintptr_t degree,
                                      uintptr_t *out);

// Runs inverse excision on a relative cyclic cycle given as a chain
// document. `*certificate_json` receives a certificate document owned by
// the caller (free with [`exl_string_free`]); it is only written when the
// certificate verifies.
//
// # Safety
// `ext` must be a live handle, `chain_json` NUL-terminated, and
// `certificate_json` a valid pointer.
enum ExlStatus exl_inverse_excision_json(const struct ExlExtension *ext,
                                         const char *chain_json,
                                         char **certificate_json);

// Re-checks a certificate document. Returns `Ok` only if it verifies.
//
// # Safety
// `json` must be a NUL-terminated string.
enum ExlStatus exl_verify_certificate_json(const char *json);

// Message for the last failing call on this thread, or null. The pointer
// stays valid until the next call into this library on the same thread.
const char *exl_last_error_message(void);

// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void exl_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EXCISIONLAB_H */
