/* C interface for the dvdbinom library.
 *
 * Models are opaque handles; create them with dvdb_model_new and release
 * them with dvdb_model_free. All other functions borrow the handle and are
 * safe to call from multiple threads concurrently. Fallible calls return a
 * dvdb_status and write results through out-pointers; strings returned
 * through char** must be released with dvdb_string_free.
 */

#ifndef DVDBINOM_H
#define DVDBINOM_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dvdb_status {
  DVDB_STATUS_OK = 0,
  DVDB_STATUS_NULL_POINTER = 1,
  DVDB_STATUS_NON_PRIME = 2,
  DVDB_STATUS_REDUCIBLE_MODULUS = 3,
  DVDB_STATUS_DEGREE_MISMATCH = 4,
  DVDB_STATUS_FIELD_TOO_LARGE = 5,
  DVDB_STATUS_NOT_PRIMITIVE_ROOT = 6,
  DVDB_STATUS_DIVISION_BY_ZERO = 7,
  DVDB_STATUS_LOG_OF_ZERO = 8,
  DVDB_STATUS_NOT_INTEGRAL = 9,
  DVDB_STATUS_OUT_OF_RANGE = 10,
  DVDB_STATUS_LENGTH_MISMATCH = 11,
  DVDB_STATUS_INVALID_REPS = 12,
  DVDB_STATUS_INVALID_CONFIG = 13,
  DVDB_STATUS_PARSE_ERROR = 14,
  DVDB_STATUS_BUFFER_TOO_SMALL = 15,
  DVDB_STATUS_INVALID_ARGUMENT = 16,
  DVDB_STATUS_PANIC = 17,
} dvdb_status;

/* Opaque model handle. */
typedef struct DvdbModel DvdbModel;

/* Model kinds for dvdb_model_new. */
#define DVDB_MODEL_ZP 0u  /* integers localized at p (requires d = 1) */
#define DVDB_MODEL_FQT 1u /* F_q[t] localized at t */

/* Creates a model. modulus may be NULL (with modulus_len 0) to use the
 * smallest irreducible; it is the little-endian coefficient vector of a
 * monic degree-d polynomial, length d+1. When use_seed is true the
 * representatives are deterministically permuted and perturbed from
 * rep_seed; otherwise the defaults (0..q-1) are used. primitive_root
 * overrides the generator by element code when >= 0. On success writes a
 * handle to *out. */
dvdb_status dvdb_model_new(uint32_t kind, uint64_t p, uint32_t d,
                           const uint16_t *modulus, size_t modulus_len,
                           bool use_seed, uint64_t rep_seed,
                           int32_t primitive_root, DvdbModel **out);

/* Releases a handle. NULL is a no-op. */
void dvdb_model_free(DvdbModel *model);

/* Residue field size q, or 0 for NULL. */
uint64_t dvdb_model_q(const DvdbModel *model);

/* Coefficient class of F_n(u_m): -1 for the zero residue, otherwise the
 * discrete log of the class in [0, q-2]. */
dvdb_status dvdb_coeff_class(const DvdbModel *model, uint64_t n, uint64_t m,
                             int64_t *out_class);

/* Element code of the residue of F_n(u_m). */
dvdb_status dvdb_coeff_residue_code(const DvdbModel *model, uint64_t n,
                                    uint64_t m, uint32_t *out_code);

/* Exact value of F_n(u_m) as a reduced fraction string; free the result
 * with dvdb_string_free. */
dvdb_status dvdb_coeff_exact(const DvdbModel *model, uint64_t n, uint64_t m,
                             char **out);

/* u_n rendered in the model's textual syntax; free with dvdb_string_free. */
dvdb_status dvdb_un_render(const DvdbModel *model, uint64_t n, char **out);

/* Frees a string returned by this library. NULL is a no-op. */
void dvdb_string_free(char *s);

/* Expands an element literal to depth digit labels. out_digits must hold
 * out_len >= depth entries. */
dvdb_status dvdb_expand(const DvdbModel *model, const char *element,
                        size_t depth, uint16_t *out_digits, size_t out_len);

/* Residue-class distribution for index n: writes q-1 counts into out_eps
 * (eps_len >= q-1) and the zero-class count into out_zero. */
dvdb_status dvdb_dist(const DvdbModel *model, uint64_t n, uint64_t *out_eps,
                      size_t eps_len, uint64_t *out_zero);

/* Coefficients of the generating polynomial of index n: writes q-1 values
 * into out_coeffs (coeffs_len >= q-1). */
dvdb_status dvdb_gen_poly(const DvdbModel *model, uint64_t n,
                          uint64_t *out_coeffs, size_t coeffs_len);

/* Checks the generating-polynomial product identity for all n <= max_n;
 * writes the first failing n, or UINT64_MAX when all pass. */
dvdb_status dvdb_verify_gen_poly_product(const DvdbModel *model,
                                         uint64_t max_n,
                                         uint64_t *out_first_failure);

/* Checks the node-sequence valuation law for 0 <= m < n <= max_n and
 * 1 <= k <= kmax. */
dvdb_status dvdb_verify_vwdwo(const DvdbModel *model, uint64_t max_n,
                              uint32_t kmax, bool *out_pass);

/* Static version string; do not free. */
const char *dvdb_version(void);

#ifdef __cplusplus
}
#endif

#endif /* DVDBINOM_H */
