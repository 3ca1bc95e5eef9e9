#ifndef XYZ2_H
#define XYZ2_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes. Zero is success.
typedef enum Xyz2Status {
  XYZ2_STATUS_OK = 0,
  XYZ2_STATUS_NULL_POINTER = 1,
  XYZ2_STATUS_INVALID_PARAMETER = 2,
  XYZ2_STATUS_DIMENSION = 3,
  XYZ2_STATUS_CAPABILITY = 4,
  XYZ2_STATUS_CONSISTENCY = 5,
  XYZ2_STATUS_PRECONDITION = 6,
  XYZ2_STATUS_PARSE = 7,
  XYZ2_STATUS_IO = 8,
  XYZ2_STATUS_INTERNAL = 9,
} Xyz2Status;

// Opaque stabilizer code handle.
typedef struct Xyz2Code Xyz2Code;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. Valid until
// the next call into this library from the same thread.
const char *xyz2_last_error(void);

// Library version as a static string.
const char *xyz2_version(void);

// Builds a code family member, e.g. `"xyz2"` or `"xzzx"`, at odd distance `d`.
//
// # Safety
// `family` must be a NUL-terminated string and `out` a valid pointer.
enum Xyz2Status xyz2_code_build(const char *family, size_t d, struct Xyz2Code **out);

// Parses a code from its text form.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum Xyz2Status xyz2_code_parse(const char *text, struct Xyz2Code **out);

// Releases a handle. Null is ignored.
//
// # Safety
// `code` must come from this library and not be used afterwards.
void xyz2_code_free(struct Xyz2Code *code);

// Qubit count, or 0 for a null handle.
//
// # Safety
// `code` must be null or a live handle.
size_t xyz2_code_num_qubits(const struct Xyz2Code *code);

// Generator count, or 0 for a null handle.
//
// # Safety
// `code` must be null or a live handle.
size_t xyz2_code_num_generators(const struct Xyz2Code *code);

// Syndrome of an error chain given as one letter per qubit. Writes one
// 0/1 byte per generator.
//
// # Safety
// `chain` must hold `n` bytes and `out` room for `m` bytes.
enum Xyz2Status xyz2_syndrome(const struct Xyz2Code *code,
                              const uint8_t *chain,
                              size_t n,
                              uint8_t *out,
                              size_t m);

// Exact maximum-likelihood decoding (codes of at most 20 qubits).
// `scores` receives the four log class probabilities in I, X, Y, Z order
// and may be null; `chosen` receives the class index.
//
// # Safety
// `syndrome` must hold `m` bytes; `scores`, when non-null, four doubles.
enum Xyz2Status xyz2_decode_exact(const struct Xyz2Code *code,
                                  const uint8_t *syndrome,
                                  size_t m,
                                  double p,
                                  double eta,
                                  uint8_t axis,
                                  double *scores,
                                  uint8_t *chosen);

// Metropolis effective-weight decoding. `p_sample` NaN and
// `steps_per_class` 0 select the defaults.
//
// # Safety
// As for [`xyz2_decode_exact`].
enum Xyz2Status xyz2_decode_ewd(const struct Xyz2Code *code,
                                const uint8_t *syndrome,
                                size_t m,
                                double p,
                                double eta,
                                uint8_t axis,
                                double p_sample,
                                size_t steps_per_class,
                                uint64_t seed,
                                double *scores,
                                uint8_t *chosen);

// Closed-form failure rate under pure `axis` noise, for `"xyz2"` and `"xzzx"`.
//
// # Safety
// `family` must be a NUL-terminated string and `out` a valid pointer.
enum Xyz2Status xyz2_analytic_pf(const char *family, size_t d, double p, uint8_t axis, double *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* XYZ2_H */
