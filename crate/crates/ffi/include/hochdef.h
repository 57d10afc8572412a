#ifndef HOCHDEF_H
#define HOCHDEF_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HdStatus {
  HD_STATUS_OK = 0,
  HD_STATUS_NULL_POINTER = 1,
  HD_STATUS_INVALID_UTF8 = 2,
  HD_STATUS_PARSE = 3,
  HD_STATUS_OUT_OF_RANGE = 4,
  HD_STATUS_COMPUTE = 5,
  HD_STATUS_OVERFLOW = 6,
  HD_STATUS_PANIC = 7,
} HdStatus;

typedef struct HdAlgebra HdAlgebra;

typedef struct HdLattice HdLattice;

typedef struct HdReport HdReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failure on this thread; empty if none. Valid until
// the next call into this library from the same thread.
const char *hd_last_error(void);

// # Safety
// `s` must come from this library or be null.
void hd_string_free(char *s);

// Parses a quiver description (`vertices`, `arrow`, `rel` lines).
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum HdStatus hd_algebra_from_text(const char *text, struct HdAlgebra **out);

// One of `a3`, `a3-rel`, `kronecker`, `point`, `beilinson-p2`.
//
// # Safety
// `name` must be a NUL-terminated string and `out` a valid pointer.
enum HdStatus hd_algebra_builtin(const char *name, struct HdAlgebra **out);

// `k[x]/(x^m)`, `m >= 1`.
//
// # Safety
// `out` must be a valid pointer.
enum HdStatus hd_algebra_truncated_polynomial(size_t m, struct HdAlgebra **out);

// # Safety
// `a` must come from this library or be null.
void hd_algebra_free(struct HdAlgebra *a);

// # Safety
// `a` must be a live handle and `out` a valid pointer.
enum HdStatus hd_algebra_dim(const struct HdAlgebra *a, size_t *out);

// `dim HH^degree(A, A)` with the default budget.
//
// # Safety
// `a` must be a live handle and `out` a valid pointer.
enum HdStatus hd_algebra_hh_dimension(const struct HdAlgebra *a, size_t degree, size_t *out);

// Parses the lattice text format (`n`, `d`, Gram rows, optional `ranks`
// and `labels`).
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum HdStatus hd_lattice_from_text(const char *text, struct HdLattice **out);

// # Safety
// `l` must come from this library or be null.
void hd_lattice_free(struct HdLattice *l);

// # Safety
// `l` must be a live handle and `out` a valid pointer.
enum HdStatus hd_lattice_len(const struct HdLattice *l, size_t *out);

// `χ(E_i, E_j)` for the current collection, 0-based.
//
// # Safety
// `l` must be a live handle and `out` a valid pointer.
enum HdStatus hd_lattice_gram_entry(const struct HdLattice *l, size_t i, size_t j, int64_t *out);

// Applies a word such as `"L1 R2"` and returns a new lattice.
//
// # Safety
// `l` must be a live handle, `word` a NUL-terminated string and `out` a
// valid pointer.
enum HdStatus hd_lattice_mutate(const struct HdLattice *l,
                                const char *word,
                                struct HdLattice **out);

// # Safety
// `l` must be a live handle and `out` a valid pointer.
enum HdStatus hd_lattice_to_text(const struct HdLattice *l, char **out);

// # Safety
// `l` must be a live handle and `out` a valid pointer.
enum HdStatus hd_lattice_helix_check(const struct HdLattice *l, struct HdReport **out);

// Runs the full self-test with the given seed.
//
// # Safety
// `out` must be a valid pointer.
enum HdStatus hd_selftest(uint64_t seed, struct HdReport **out);

// # Safety
// `r` must come from this library or be null.
void hd_report_free(struct HdReport *r);

// # Safety
// `r` must be a live handle and `out` a valid pointer.
enum HdStatus hd_report_passed(const struct HdReport *r, bool *out);

// # Safety
// `r` must be a live handle and `out` a valid pointer.
enum HdStatus hd_report_check_count(const struct HdReport *r, size_t *out);

// Human-readable text, or JSON when `machine` is true.
//
// # Safety
// `r` must be a live handle and `out` a valid pointer.
enum HdStatus hd_report_to_text(const struct HdReport *r, bool machine, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HOCHDEF_H */
