#ifndef POLYSTRUCT_H
#define POLYSTRUCT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PsStatus {
  PS_STATUS_OK = 0,
  /**
   * Bad input, violated precondition or unsupported request.
   */
  PS_STATUS_DOMAIN = 1,
  /**
   * A resource cap was exceeded.
   */
  PS_STATUS_CAP = 2,
  /**
   * An internal consistency check failed.
   */
  PS_STATUS_INTERNAL = 3,
  PS_STATUS_NULL_POINTER = 4,
  PS_STATUS_PANIC = 5,
} PsStatus;

/**
 * Opaque polynomial handle.
 */
typedef struct PsPoly PsPoly;

/**
 * Last error message on this thread, or null. Valid until the next call
 * into the library from the same thread.
 */
const char *ps_last_error_message(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed once.
 */
void ps_string_free(char *s);

/**
 * Parse `text` over `F_p` in `n` variables (`n = 0` infers the arity).
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` writable.
 */
enum PsStatus ps_poly_parse(uint32_t p, size_t n, const char *text, struct PsPoly **out);

/**
 * # Safety
 * `poly` must be null or a handle from [`ps_poly_parse`], freed once.
 */
void ps_poly_free(struct PsPoly *poly);

/**
 * # Safety
 * `poly` must be a live handle and `out_n`, `out_degree` writable.
 */
enum PsStatus ps_poly_shape(const struct PsPoly *poly, size_t *out_n, uint32_t *out_degree);

/**
 * Canonical string; free with [`ps_string_free`].
 *
 * # Safety
 * `poly` must be a live handle and `out` writable.
 */
enum PsStatus ps_poly_to_string(const struct PsPoly *poly, char **out);

/**
 * # Safety
 * `point` must hold `len` values and `out` be writable.
 */
enum PsStatus ps_poly_eval(const struct PsPoly *poly,
                           const uint32_t *point,
                           size_t len,
                           uint32_t *out);

/**
 * `|E_x e(f(x))|` by enumeration.
 *
 * # Safety
 * `poly` must be a live handle and `out` writable.
 */
enum PsStatus ps_bias_exact(const struct PsPoly *poly, uint64_t enum_cap, double *out);

/**
 * Gowers `U^d` norm by enumeration.
 *
 * # Safety
 * `poly` must be a live handle and `out` writable.
 */
enum PsStatus ps_gowers_exact(const struct PsPoly *poly,
                              uint32_t d,
                              uint64_t enum_cap,
                              double *out);

/**
 * Rank of a polynomial of degree at most two; `-1` stands for infinite.
 *
 * # Safety
 * `poly` must be a live handle and `out` writable.
 */
enum PsStatus ps_quadratic_rank(const struct PsPoly *poly, int64_t *out);

/**
 * Common zeros of `len` polynomials on one `F_p^n`.
 *
 * # Safety
 * `polys` must point at `len` live handles and `out` be writable.
 */
enum PsStatus ps_count_points(const struct PsPoly *const *polys,
                              size_t len,
                              uint64_t enum_cap,
                              uint64_t *out);

/**
 * Search for `Q^r = sum R_i P_i`. `*out_json` is the certificate as JSON,
 * or null when none exists within the bounds.
 *
 * # Safety
 * `gens` must point at `len` live handles, `query` be live and the out
 * pointers writable.
 */
enum PsStatus ps_nss_find(const struct PsPoly *const *gens,
                          size_t len,
                          const struct PsPoly *query,
                          uint32_t d_max,
                          uint32_t r_max,
                          size_t unknowns_cap,
                          bool *out_found,
                          char **out_json);

/**
 * Run the command line with `argv` (program name first). The rendered
 * output goes to `*out_stdout` and the process exit code to `*out_code`.
 *
 * # Safety
 * `argv` must hold `argc` NUL-terminated strings and the out pointers be
 * writable.
 */
enum PsStatus ps_cli_dispatch(size_t argc,
                              const char *const *argv,
                              char **out_stdout,
                              int32_t *out_code);

#endif /* POLYSTRUCT_H */
