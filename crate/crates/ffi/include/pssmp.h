#ifndef PSSMP_H
#define PSSMP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PssmpStatus {
  PSSMP_STATUS_OK = 0,
  /**
   * Bad parameters, constraint violations, malformed JSON.
   */
  PSSMP_STATUS_INVALID_ARGUMENT = 1,
  /**
   * Overflow, non-convergence and other numeric failures.
   */
  PSSMP_STATUS_NUMERIC = 2,
  PSSMP_STATUS_NULL_POINTER = 3,
  /**
   * A Rust panic was caught at the boundary.
   */
  PSSMP_STATUS_PANIC = 4,
} PssmpStatus;

typedef struct PssmpExponent PssmpExponent;

typedef struct PssmpOccupation PssmpOccupation;

typedef struct PssmpScale PssmpScale;

typedef struct PssmpSeries PssmpSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer stays
 * valid until the next call into the library from this thread.
 */
const char *pssmp_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *pssmp_version(void);

/**
 * Exponent of a named family such as `"bessel:3"` or `"sawtooth:3,1"`.
 *
 * # Safety
 * `preset` must be a NUL-terminated string; `out_handle` must be writable.
 */
enum PssmpStatus pssmp_exponent_from_preset(const char *preset, struct PssmpExponent **out_handle);

/**
 * Exponent from its JSON descriptor.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out_handle` must be writable.
 */
enum PssmpStatus pssmp_exponent_from_json(const char *json, struct PssmpExponent **out_handle);

/**
 * `T_β` applied to `exponent`, as a new handle.
 *
 * # Safety
 * `exponent` must be a live handle; `out_handle` must be writable.
 */
enum PssmpStatus pssmp_exponent_tee(const struct PssmpExponent *exponent,
                                    double beta,
                                    struct PssmpExponent **out_handle);

/**
 * Esscher transform of `exponent`, as a new handle.
 *
 * # Safety
 * `exponent` must be a live handle; `out_handle` must be writable.
 */
enum PssmpStatus pssmp_exponent_esscher(const struct PssmpExponent *exponent,
                                        double beta,
                                        struct PssmpExponent **out_handle);

/**
 * # Safety
 * `exponent` must be a live handle; `value` must be writable.
 */
enum PssmpStatus pssmp_exponent_eval(const struct PssmpExponent *exponent, double u, double *value);

/**
 * Largest root θ of the exponent.
 *
 * # Safety
 * `exponent` must be a live handle; `theta` must be writable.
 */
enum PssmpStatus pssmp_exponent_largest_root(const struct PssmpExponent *exponent, double *theta);

/**
 * # Safety
 * `exponent` must be NULL or a handle not freed before.
 */
void pssmp_exponent_free(struct PssmpExponent *exponent);

/**
 * Series evaluator of `I_{ψ,α}`.
 *
 * # Safety
 * `exponent` must be a live handle; `out_handle` must be writable.
 */
enum PssmpStatus pssmp_series_new(const struct PssmpExponent *exponent,
                                  double alpha,
                                  struct PssmpSeries **out_handle);

/**
 * `I(z)`, with the number of terms and the tail bound. `terms_used` and
 * `tail_bound` may be NULL.
 *
 * # Safety
 * `series` must be a live handle; `value` must be writable.
 */
enum PssmpStatus pssmp_series_eval(const struct PssmpSeries *series,
                                   double z,
                                   double *value,
                                   size_t *terms_used,
                                   double *tail_bound);

/**
 * `E_x[exp(-q T_a)]` for the process with the series' exponent.
 *
 * # Safety
 * `series` must be a live handle; `value` must be writable.
 */
enum PssmpStatus pssmp_hitting_laplace(const struct PssmpSeries *series,
                                       double x,
                                       double a,
                                       double q,
                                       double *value);

/**
 * # Safety
 * `series` must be NULL or a handle not freed before.
 */
void pssmp_series_free(struct PssmpSeries *series);

/**
 * Scale function of `exponent`; closed form when available, Talbot otherwise.
 *
 * # Safety
 * `exponent` must be a live handle; `out_handle` must be writable.
 */
enum PssmpStatus pssmp_scale_new(const struct PssmpExponent *exponent,
                                 struct PssmpScale **out_handle);

/**
 * # Safety
 * `scale` must be a live handle; `value` must be writable.
 */
enum PssmpStatus pssmp_scale_eval(const struct PssmpScale *scale, double x, double *value);

/**
 * # Safety
 * `scale` must be NULL or a handle not freed before.
 */
void pssmp_scale_free(struct PssmpScale *scale);

/**
 * Probability that the process with exponent `T_α ψ` started at `y >= 1`
 * never goes below 1.
 *
 * # Safety
 * `exponent` must be a live handle; `value` must be writable.
 */
enum PssmpStatus pssmp_ruin_probability(const struct PssmpExponent *exponent,
                                        double alpha,
                                        double y,
                                        double *value);

/**
 * Occupation-time evaluator for `T_α ψ`.
 *
 * # Safety
 * `exponent` must be a live handle; `out_handle` must be writable.
 */
enum PssmpStatus pssmp_occupation_new(const struct PssmpExponent *exponent,
                                      double alpha,
                                      struct PssmpOccupation **out_handle);

/**
 * `E_x[exp(-q ∫ 1{X_s <= a} ds)]`.
 *
 * # Safety
 * `occupation` must be a live handle; `value` must be writable.
 */
enum PssmpStatus pssmp_occupation_laplace(const struct PssmpOccupation *occupation,
                                          double x,
                                          double a,
                                          double q,
                                          double *value);

/**
 * # Safety
 * `occupation` must be NULL or a handle not freed before.
 */
void pssmp_occupation_free(struct PssmpOccupation *occupation);

/**
 * Special function described by JSON, e.g. `{"family":"bessel_i","order":0.5}`.
 *
 * # Safety
 * `params_json` must be a NUL-terminated string; `value` must be writable.
 */
enum PssmpStatus pssmp_special_eval(const char *params_json, double x, double *value);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PSSMP_H */
