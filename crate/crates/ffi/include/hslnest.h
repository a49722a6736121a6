#ifndef HSLNEST_H
#define HSLNEST_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HnStatus {
  HN_STATUS_OK = 0,
  HN_STATUS_NULL_ARGUMENT = 1,
  HN_STATUS_INVALID_UTF8 = 2,
  HN_STATUS_PARSE_ERROR = 3,
  /**
   * The input parsed but is not valid, e.g. a proof that does not check.
   */
  HN_STATUS_INVALID = 4,
  /**
   * Search gave up, or no path exists.
   */
  HN_STATUS_NOT_FOUND = 5,
  HN_STATUS_PANIC = 6,
} HnStatus;

typedef enum HnCalculus {
  HN_CALCULUS_LABELLED = 0,
  HN_CALCULUS_REFINED = 1,
  HN_CALCULUS_EITHER = 2,
  HN_CALCULUS_NESTED = 3,
} HnCalculus;

/**
 * An axiom set: HSL pairs and optionally seriality.
 */
typedef struct HnAxioms HnAxioms;

/**
 * A nested proof found by [`hn_prove`].
 */
typedef struct HnProof HnProof;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next call into this library on the same thread.
 */
const char *hn_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void hn_string_free(char *s);

/**
 * Parses an axiom set such as `"D; 1,1"` or `"T 4"`. The empty string gives
 * the base logic.
 *
 * # Safety
 * `spec` must be a NUL-terminated string; `out` must be writable.
 */
enum HnStatus hn_axioms_parse(const char *spec, struct HnAxioms **out);

/**
 * # Safety
 * `a` must be null or a handle from [`hn_axioms_parse`] not yet freed.
 */
void hn_axioms_free(struct HnAxioms *a);

/**
 * Writes the grammar of an axiom set, e.g. `{d -> bbd, b -> bdd}`.
 *
 * # Safety
 * `a` must be a live handle; `out` must be writable.
 */
enum HnStatus hn_axioms_grammar(const struct HnAxioms *a, char **out);

/**
 * Searches for a nested proof of `goal` with height at most `depth`.
 * `max_expansions` of 0 means the default budget. `goal` is a formula, or a
 * nested sequent when `is_sequent` is nonzero. Returns `NotFound` when no
 * proof was found.
 *
 * # Safety
 * `a` must be a live handle, `goal` a NUL-terminated string and `out` writable.
 */
enum HnStatus hn_prove(const struct HnAxioms *a,
                       const char *goal,
                       int32_t is_sequent,
                       uint32_t depth,
                       uint64_t max_expansions,
                       struct HnProof **out);

/**
 * # Safety
 * `p` must be a live handle from [`hn_prove`].
 */
uint32_t hn_proof_height(const struct HnProof *p);

/**
 * Writes the proof as JSON.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum HnStatus hn_proof_to_json(const struct HnProof *p, char **out);

/**
 * # Safety
 * `p` must be null or a handle from [`hn_prove`] not yet freed.
 */
void hn_proof_free(struct HnProof *p);

/**
 * Checks a JSON proof. `Invalid` means it parsed but some node is wrong.
 *
 * # Safety
 * `a` must be a live handle and `json` a NUL-terminated string.
 */
enum HnStatus hn_check_json(const struct HnAxioms *a, enum HnCalculus calculus, const char *json);

/**
 * Removes every `S(n,k)` from a labelled JSON proof and writes the refined
 * proof as JSON.
 *
 * # Safety
 * `a` must be a live handle, `json` a NUL-terminated string, `out` writable.
 */
enum HnStatus hn_refine_json(const struct HnAxioms *a, const char *json, char **out);

/**
 * Finds a propagation path from `from` to `to` over relational atoms such as
 * `"v R u, u R w"` and writes it as `"w, b, u, d, v"`.
 *
 * # Safety
 * All pointers must be valid; strings NUL-terminated.
 */
enum HnStatus hn_reach(const struct HnAxioms *a,
                       const char *relations,
                       const char *from,
                       const char *to,
                       char **out);

/**
 * Translates a sequent between the two syntaxes: a nested sequent to a
 * labelled one when `to_nested` is zero, otherwise a labelled tree sequent
 * to a nested one.
 *
 * # Safety
 * `seq` must be a NUL-terminated string; `out` must be writable.
 */
enum HnStatus hn_translate_sequent(const char *seq, int32_t to_nested_form, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HSLNEST_H */
