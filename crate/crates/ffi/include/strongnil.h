#ifndef STRONGNIL_H
#define STRONGNIL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum StrongnilStatus {
  STRONGNIL_STATUS_OK = 0,
  STRONGNIL_STATUS_NULL_POINTER = 1,
  STRONGNIL_STATUS_INVALID_UTF8 = 2,
  // Malformed JSON, unknown variable, shape or parse error.
  STRONGNIL_STATUS_INVALID_INPUT = 3,
  // Well-formed input the requested operation does not apply to.
  STRONGNIL_STATUS_PRECONDITION = 4,
  // The term cap set by `STRONGNIL_MAX_TERMS` was exceeded.
  STRONGNIL_STATUS_TERM_LIMIT = 5,
  // Cross-checks disagreed or the engine panicked.
  STRONGNIL_STATUS_INTERNAL = 6,
  // Fixture suite ran but some verdict did not match.
  STRONGNIL_STATUS_MISMATCH = 7,
} StrongnilStatus;

// Polynomial map x -> H(x) over Q.
typedef struct StrongnilMap StrongnilMap;

// Square polynomial matrix over Q or Q[eps].
typedef struct StrongnilMatrix StrongnilMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL. Valid until
// the next call into this library on the same thread.
const char *strongnil_last_error(void);

// Library version, static storage.
const char *strongnil_version(void);

// Releases a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void strongnil_string_free(char *s);

// Parses a matrix document `{"n", "m", "M", "ring"}`.
//
// # Safety
// `json` must be NUL-terminated; `out` must be writable.
enum StrongnilStatus strongnil_matrix_from_json(const char *json, struct StrongnilMatrix **out);

// Built-in fixture by name. Map fixtures give their Jacobian, the free
// fixture its commutative image. `d` and `m`
// parametrize H5 and DUAL; 0 picks the default.
//
// # Safety
// `name` must be NUL-terminated; `out` must be writable.
enum StrongnilStatus strongnil_matrix_from_fixture(const char *name,
                                                   uint32_t d,
                                                   uint32_t m,
                                                   struct StrongnilMatrix **out);

// # Safety
// `m` must be NULL or a live handle from this library.
void strongnil_matrix_free(struct StrongnilMatrix *m);

// Matrix size.
//
// # Safety
// `m` must be a live handle; `out` must be writable.
enum StrongnilStatus strongnil_matrix_size(const struct StrongnilMatrix *m, size_t *out);

// Nilpotency and strong nilpotency indices. Over Q, an index of 0 means
// "not nilpotent". Over Q[eps] the strong index is searched up to
// `max_r` tuples (0 picks the default bound) and 0 means none was found.
//
// # Safety
// `m` must be a live handle; both outputs must be writable.
enum StrongnilStatus strongnil_matrix_indices(const struct StrongnilMatrix *m,
                                              uint32_t max_r,
                                              size_t *regular,
                                              size_t *strong);

// Full JSON report, as printed by `strongnil analyze-matrix`. `r` selects
// a tuple-product check (0 for none over Q) or the search bound over Q[eps].
//
// # Safety
// `m` must be a live handle; `out` must be writable.
enum StrongnilStatus strongnil_matrix_report(const struct StrongnilMatrix *m,
                                             uint32_t r,
                                             char **out);

// Triangularization certificate or witness as JSON. Over Q only.
//
// # Safety
// `m` must be a live handle; `out` must be writable.
enum StrongnilStatus strongnil_matrix_triangularize(const struct StrongnilMatrix *m, char **out);

// The matrix as a JSON document accepted by `strongnil_matrix_from_json`.
// `n` is the variable count written to the document.
//
// # Safety
// `m` must be a live handle; `out` must be writable.
enum StrongnilStatus strongnil_matrix_to_json(const struct StrongnilMatrix *m,
                                              size_t n,
                                              char **out);

// Parses a map document `{"n", "H"}`.
//
// # Safety
// `json` must be NUL-terminated; `out` must be writable.
enum StrongnilStatus strongnil_map_from_json(const char *json, struct StrongnilMap **out);

// # Safety
// `h` must be NULL or a live handle from this library.
void strongnil_map_free(struct StrongnilMap *h);

// Jacobian of the map as a new matrix handle.
//
// # Safety
// `h` must be a live handle; `out` must be writable.
enum StrongnilStatus strongnil_map_jacobian(const struct StrongnilMap *h,
                                            struct StrongnilMatrix **out);

// Map report as printed by `strongnil analyze-map`.
//
// # Safety
// `h` must be a live handle; `out` must be writable.
enum StrongnilStatus strongnil_map_report(const struct StrongnilMap *h, char **out);

// Quasi-translation checks as printed by `strongnil check-qt`.
//
// # Safety
// `h` must be a live handle; `out` must be writable.
enum StrongnilStatus strongnil_map_check_qt(const struct StrongnilMap *h, char **out);

// The four equivalent statements for tuple count `r` (0 picks the strong
// index, or n). `statement` 1..=4 checks one statement, 0 checks all.
//
// # Safety
// `h` must be a live handle; `out` must be writable.
enum StrongnilStatus strongnil_map_equivalences(const struct StrongnilMap *h,
                                                uint32_t r,
                                                uint8_t statement,
                                                char **out);

// Runs the built-in fixture corpus. Returns `Mismatch` (with the report
// still written) when any verdict differs from its expectation.
//
// # Safety
// `out` must be writable.
enum StrongnilStatus strongnil_run_fixtures(char **out);

// Noncommutative check. With `json` NULL, reports the built-in
// non-homogeneous counterexample; otherwise reads a matrix document whose
// entries are noncommutative polynomials.
//
// # Safety
// `json` must be NULL or NUL-terminated; `out` must be writable.
enum StrongnilStatus strongnil_nc_check(const char *json, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STRONGNIL_H */
