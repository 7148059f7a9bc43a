#ifndef MASSEY_H
#define MASSEY_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MasseyStatus {
  MASSEY_STATUS_OK = 0,
  MASSEY_STATUS_NULL_POINTER = 1,
  MASSEY_STATUS_INVALID_ARGUMENT = 2,
  MASSEY_STATUS_PARSE_ERROR = 3,
  MASSEY_STATUS_NOT_PRIME = 4,
  MASSEY_STATUS_DIMENSION_MISMATCH = 5,
  MASSEY_STATUS_UNDEFINED_PRODUCT = 6,
  MASSEY_STATUS_IO_ERROR = 7,
  MASSEY_STATUS_PANIC = 8,
} MasseyStatus;

/*
 Opaque result of a Massey product computation.
 */
typedef struct MasseyOutcome MasseyOutcome;

/*
 Opaque presentation handle.
 */
typedef struct MasseyPresentation MasseyPresentation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread, or NULL after a success.
 Valid until the next call into this library on the same thread.
 */
const char *massey_last_error(void);

/*
 Frees a string returned by this library. NULL is ignored.

 # Safety
 `s` must come from this library and not have been freed.
 */
void massey_string_free(char *s);

/*
 Builds the presentation of the pure braid group of `A(r,1,3)`, `r >= 2`.

 # Safety
 `out` must be a valid pointer.
 */
enum MasseyStatus massey_presentation_monomial(uint32_t r, struct MasseyPresentation **out);

/*
 Builds the three-generator presentation of the conic with three tangent lines.

 # Safety
 `out` must be a valid pointer.
 */
enum MasseyStatus massey_presentation_kty(struct MasseyPresentation **out);

/*
 Parses a presentation in the text format.

 # Safety
 `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum MasseyStatus massey_presentation_parse(const char *text, struct MasseyPresentation **out);

/*
 Loads a presentation file.

 # Safety
 `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum MasseyStatus massey_presentation_load(const char *path, struct MasseyPresentation **out);

/*
 # Safety
 `p` must come from a `massey_presentation_*` constructor and not have been freed.
 */
void massey_presentation_free(struct MasseyPresentation *p);

/*
 # Safety
 `p` must be a live handle.
 */
enum MasseyStatus massey_presentation_num_generators(const struct MasseyPresentation *p,
                                                     size_t *out);

/*
 # Safety
 `p` must be a live handle.
 */
enum MasseyStatus massey_presentation_num_relators(const struct MasseyPresentation *p, size_t *out);

/*
 Name of relator `index` (0-based); free with `massey_string_free`.

 # Safety
 `p` must be a live handle and `out` a valid pointer.
 */
enum MasseyStatus massey_presentation_relator_name(const struct MasseyPresentation *p,
                                                   size_t index,
                                                   char **out);

/*
 Text format (`as_json = false`) or JSON (`as_json = true`).

 # Safety
 `p` must be a live handle and `out` a valid pointer.
 */
enum MasseyStatus massey_presentation_format(const struct MasseyPresentation *p,
                                             bool as_json,
                                             char **out);

/*
 Magnus coefficient `ε_I(w)` as a decimal string. `modulus` is a prime, or
 0 for integer coefficients; `index` holds 1-based generator indices.

 # Safety
 `word` must be NUL-terminated, `index` must point to `index_len` values and
 `out` must be valid.
 */
enum MasseyStatus massey_eps(const char *word,
                             const uint32_t *index,
                             size_t index_len,
                             uint32_t modulus,
                             char **out);

/*
 `α ∪ β` over `F_p`, written to `out` (length = number of relators).

 # Safety
 `alpha` and `beta` must point to `len` values, `out` to `out_len` values.
 */
enum MasseyStatus massey_cup(const struct MasseyPresentation *p,
                             uint32_t prime,
                             const uint32_t *alpha,
                             const uint32_t *beta,
                             size_t len,
                             uint32_t *out,
                             size_t out_len);

/*
 Computes `⟨α, β, γ⟩` modulo indeterminacy. Fails with
 `MASSEY_STATUS_UNDEFINED_PRODUCT` when `α∪β` or `β∪γ` is nonzero.

 # Safety
 Class pointers must hold `len` values; `out` must be valid.
 */
enum MasseyStatus massey_triple(const struct MasseyPresentation *p,
                                uint32_t prime,
                                const uint32_t *alpha,
                                const uint32_t *beta,
                                const uint32_t *gamma,
                                size_t len,
                                struct MasseyOutcome **out);

/*
 # Safety
 `o` must be a live outcome handle.
 */
enum MasseyStatus massey_outcome_vanishes(const struct MasseyOutcome *o, bool *out);

/*
 # Safety
 `o` must be a live outcome handle.
 */
enum MasseyStatus massey_outcome_indeterminacy_rank(const struct MasseyOutcome *o, size_t *out);

/*
 Copies the representative 2-class (length = number of relators).

 # Safety
 `o` must be a live outcome handle and `out` must hold `out_len` values.
 */
enum MasseyStatus massey_outcome_representative(const struct MasseyOutcome *o,
                                                uint32_t *out,
                                                size_t out_len);

/*
 Number of relators the representative is indexed by.

 # Safety
 `o` must be a live outcome handle.
 */
enum MasseyStatus massey_outcome_len(const struct MasseyOutcome *o, size_t *out);

/*
 JSON with keys `representative`, `relator_names`, `indeterminacy_rank`,
 `vanishes`, `witness`.

 # Safety
 `o` must be a live outcome handle and `out` a valid pointer.
 */
enum MasseyStatus massey_outcome_json(const struct MasseyOutcome *o, char **out);

/*
 # Safety
 `o` must come from `massey_triple` and not have been freed.
 */
void massey_outcome_free(struct MasseyOutcome *o);

/*
 Dimension of the resonance component `C_Π` of `A(r,1,3)` over `F_p`.

 # Safety
 `out` must be a valid pointer.
 */
enum MasseyStatus massey_cpi_dimension(uint32_t r, uint32_t prime, size_t *out);

/*
 Runs the non-vanishing check for `A(p,1,3)`. `passed` receives the overall
 verdict; `report_json`, if not NULL, receives the full report.

 # Safety
 `passed` must be valid; `report_json` may be NULL.
 */
enum MasseyStatus massey_verify_main(uint32_t prime, bool *passed, char **report_json);

/*
 Runs the `F_2` table for the conic with three tangent lines.

 # Safety
 `passed` must be valid; `report_json` may be NULL.
 */
enum MasseyStatus massey_verify_kty(bool *passed, char **report_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MASSEY_H */
