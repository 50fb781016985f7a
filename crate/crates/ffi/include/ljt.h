#ifndef LJT_H
#define LJT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LjtStatus {
  LJT_STATUS_OK = 0,
  LJT_STATUS_NULL_POINTER = 1,
  LJT_STATUS_INVALID_UTF8 = 2,
  LJT_STATUS_PARSE_ERROR = 3,
  LJT_STATUS_PRECONDITION = 4,
  LJT_STATUS_PANIC = 5,
} LjtStatus;

/**
 * Opaque finitary term handle.
 */
typedef struct LjtFinTerm LjtFinTerm;

/**
 * Opaque sequent handle.
 */
typedef struct LjtSequent LjtSequent;

/**
 * Result of [`ljt_decide`]. `finite` is 1 (yes), 0 (no) or -1 (unknown).
 * `witness` is null when there is no inhabitant; release it with
 * [`ljt_verdict_clear`].
 */
typedef struct LjtVerdict {
  bool inhabited;
  bool solvable;
  int32_t finite;
  char *witness;
} LjtVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message of the last failure on this thread, or null. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *ljt_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void ljt_string_free(char *s);

/**
 * Parses `Γ |- A`.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` a writable pointer.
 */
enum LjtStatus ljt_sequent_parse(const char *text, struct LjtSequent **out);

/**
 * # Safety
 * `s` must be null or a handle from [`ljt_sequent_parse`], not yet freed.
 */
void ljt_sequent_free(struct LjtSequent *s);

/**
 * # Safety
 * `s` must be a live sequent handle and `out` a writable pointer.
 */
enum LjtStatus ljt_sequent_to_string(const struct LjtSequent *s, char **out);

/**
 * The finitary representation of `s`, vacuous fixed points elided.
 *
 * # Safety
 * `s` must be a live sequent handle and `out` a writable pointer.
 */
enum LjtStatus ljt_represent(const struct LjtSequent *s, struct LjtFinTerm **out);

/**
 * Parses a finitary term, either in the textual syntax or, when `json` is
 * set, as a JSON tree.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` a writable pointer.
 */
enum LjtStatus ljt_finterm_parse(const char *text, bool json, struct LjtFinTerm **out);

/**
 * # Safety
 * `t` must be null or a finitary term handle, not yet freed.
 */
void ljt_finterm_free(struct LjtFinTerm *t);

/**
 * # Safety
 * `t` must be a live finitary term handle and `out` a writable pointer.
 */
enum LjtStatus ljt_finterm_to_string(const struct LjtFinTerm *t, bool json, char **out);

/**
 * Whether `t` has type `s` with no fixed-point declarations.
 *
 * # Safety
 * `t` and `s` must be live handles and `out` a writable pointer.
 */
enum LjtStatus ljt_finterm_typecheck(const struct LjtFinTerm *t,
                                     const struct LjtSequent *s,
                                     bool *out);

/**
 * The solution space of `s` truncated at `fuel`, as text or a JSON tree.
 *
 * # Safety
 * `s` must be a live sequent handle and `out` a writable pointer.
 */
enum LjtStatus ljt_expand(const struct LjtSequent *s, size_t fuel, bool json, char **out);

/**
 * # Safety
 * `s` must be a live sequent handle and `out` a writable pointer.
 */
enum LjtStatus ljt_check_equivalence(const struct LjtSequent *s, size_t fuel, bool *out);

/**
 * # Safety
 * `s` must be a live sequent handle and `out` a writable pointer. A
 * verdict written here must be released with [`ljt_verdict_clear`].
 */
enum LjtStatus ljt_decide(const struct LjtSequent *s, struct LjtVerdict *out);

/**
 * Frees the witness string of `v` and resets it to null.
 *
 * # Safety
 * `v` must be null or point to a verdict filled by [`ljt_decide`].
 */
void ljt_verdict_clear(struct LjtVerdict *v);

/**
 * # Safety
 * `s` must be a live sequent handle and `out` a writable pointer.
 */
enum LjtStatus ljt_count_members(const struct LjtSequent *s, size_t max_size, size_t *out);

/**
 * Typechecks a proof term, given in the textual syntax, against `s`. A
 * rejected term is not an error: `out` receives false and the reason is
 * available from [`ljt_last_error`].
 *
 * # Safety
 * `s` must be a live sequent handle, `term` a nul-terminated string and
 * `out` a writable pointer.
 */
enum LjtStatus ljt_typecheck(const struct LjtSequent *s, const char *term, bool *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LJT_H */
