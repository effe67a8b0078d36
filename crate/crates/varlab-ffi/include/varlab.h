#ifndef VARLAB_H
#define VARLAB_H

/* This file is generated by cbindgen from varlab-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Success.
#define VARLAB_OK 0

// A required pointer argument was null.
#define VARLAB_ERR_NULL -1

// A string argument was not valid UTF-8.
#define VARLAB_ERR_UTF8 -2

// Parsing or validation of the input failed.
#define VARLAB_ERR_INPUT -3

// An internal invariant failed (a caught panic).
#define VARLAB_ERR_INTERNAL -4

// Opaque handle to the memoised law tables (and optional on-disk cache).
typedef struct VarlabTables VarlabTables;

// Opaque handle to a variety presentation.
typedef struct VarlabVariety VarlabVariety;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Returns the message describing the most recent failure on this thread.
//
// The pointer stays valid until the next failing call on the same thread;
// never free it.
const char *varlab_last_error_message(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must be null or a pointer previously returned by a `varlab_*`
// function that documents string ownership transfer, not yet freed.
void varlab_string_free(char *s);

// Creates the law tables. `cache_dir` may be null for a purely in-memory
// instance, or a directory path for a persistent consequence-space cache.
//
// # Safety
// `cache_dir` must be null or a NUL-terminated string.
struct VarlabTables *varlab_tables_new(const char *cache_dir);

// Releases a tables handle. Null is ignored.
//
// # Safety
// `t` must be null or an unfreed pointer from [`varlab_tables_new`].
void varlab_tables_free(struct VarlabTables *t);

// Resolves a variety selector: `builtin:<key>` (for example
// `builtin:lie`) or a path to a presentation file.
//
// # Safety
// `spec` must be a NUL-terminated string.
struct VarlabVariety *varlab_variety_new(const char *spec);

// Parses a presentation from JSON text of the form
// `{"name": "...", "identities": ["x*x", ...]}`.
//
// # Safety
// `json_text` must be a NUL-terminated string.
struct VarlabVariety *varlab_variety_from_json(const char *json_text);

// Returns the presentation's name as a fresh string.
//
// # Safety
// `v` must be an unfreed pointer from a variety constructor.
char *varlab_variety_name(const struct VarlabVariety *v);

// Releases a variety handle. Null is ignored.
//
// # Safety
// `v` must be null or an unfreed pointer from a variety constructor.
void varlab_variety_free(struct VarlabVariety *v);

// Decides whether `identity` is a law of the variety, writing the verdict
// to `out_is_law`.
//
// # Safety
// `t` and `v` must be live handles, `identity` a NUL-terminated string and
// `out_is_law` a valid, writable pointer.
int32_t varlab_is_law(const struct VarlabTables *t,
                      const struct VarlabVariety *v,
                      const char *identity,
                      bool *out_is_law);

// Reduces a polynomial to its normal form modulo the variety's laws and
// returns it as text.
//
// # Safety
// `t` and `v` must be live handles and `polynomial` a NUL-terminated string.
char *varlab_reduce(const struct VarlabTables *t,
                    const struct VarlabVariety *v,
                    const char *polynomial);

// Runs the eight-parameter rewriting criterion and returns a JSON report
// (`solvable`, `particular`, `freedom`, `freedom_rank`).
//
// # Safety
// `t` and `v` must be live handles.
char *varlab_coherence_json(const struct VarlabTables *t, const struct VarlabVariety *v);

// Classifies an alternating variety and returns a JSON report (`verdict`,
// `jacobi`, `antiassociative`, `triple_products_vanish`, `coherent`).
// Fails when `x*x` is not a law of the variety.
//
// # Safety
// `t` and `v` must be live handles.
char *varlab_classify_json(const struct VarlabTables *t, const struct VarlabVariety *v);

// Analyses the comparison map on the standard pair with `b_vars` operator
// variables and `x_vars`/`y_vars` argument variables per factor, at total
// merged degree ≤ `max_degree`, returning the full JSON report.
//
// # Safety
// `t` and `v` must be live handles.
char *varlab_kappa_json(const struct VarlabTables *t,
                        const struct VarlabVariety *v,
                        uint32_t max_degree,
                        uint32_t b_vars,
                        uint32_t x_vars,
                        uint32_t y_vars);

// Computes the semidirect-product membership obstruction fixture and
// returns its JSON report; pass `mutated = true` for the control with the
// obstruction product removed.
char *varlab_gray_json(bool mutated);

// Decides membership of the fixed associator query `x*(y*z) + (x*y)*z` in
// the multilinear consequence space of one or more law sets. `laws_json`
// may be null for the default pair of law sets, or a JSON array of identity
// strings forming a single set.
//
// # Safety
// `t` must be a live handle; `laws_json` must be null or a NUL-terminated
// string.
char *varlab_audit_lemma34_json(const struct VarlabTables *t, const char *laws_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VARLAB_H */
