#ifndef DICKE_PROBE_H
#define DICKE_PROBE_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum DpStatus {
  DP_STATUS_OK = 0,
  DP_STATUS_NULL_POINTER = 1,
  DP_STATUS_INVALID_ARGUMENT = 2,
  DP_STATUS_UNSTABLE = 3,
  DP_STATUS_NOT_CONVERGED = 4,
  DP_STATUS_INTERNAL = 5,
} DpStatus;

/**
 * Opaque model handle; create with `dp_model_new`, release with
 * `dp_model_free`.
 */
typedef struct DpModel DpModel;

/**
 * Flat estimation report; every field is a double so the layout is
 * language-agnostic. `f_photon_counting` is NaN when photon counting was
 * skipped.
 */
typedef struct DpEstimationReport {
  double h_two_mode;
  double h_single_mode;
  double f_homodyne;
  double f_photon_counting;
  double optimal_homodyne_angle;
  double n_thermal;
  double squeezing_r;
  double pc_cutoff;
  double pc_converged;
} DpEstimationReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a model handle. Fails on non-positive frequencies or a negative
 * coupling; stability is not required here (ground-state operations check it).
 *
 * # Safety
 * `out` must point to writable storage for one pointer.
 */
enum DpStatus dp_model_new(double omega_a,
                           double omega_b,
                           double lambda,
                           double d,
                           struct DpModel **out);

/**
 * Releases a handle returned by `dp_model_new` or `dp_model_dipole_gauge`.
 * Passing NULL is a no-op.
 *
 * # Safety
 * `model` must be a pointer previously returned by this library and not yet
 * freed.
 */
void dp_model_free(struct DpModel *model);

/**
 * New handle with the mode roles swapped (the electric-dipole-gauge reading).
 *
 * # Safety
 * `model` must be a live handle; `out` must be writable.
 */
enum DpStatus dp_model_dipole_gauge(const struct DpModel *model, struct DpModel **out);

/**
 * Stability threshold d_crit = λ²/ω_b − ω_a/4. Returns NaN on NULL.
 *
 * # Safety
 * `model` must be a live handle or NULL.
 */
double dp_d_crit(const struct DpModel *model);

/**
 * Sum-rule value d_TRK = λ²/ω_b. Returns NaN on NULL.
 *
 * # Safety
 * `model` must be a live handle or NULL.
 */
double dp_d_trk(const struct DpModel *model);

/**
 * Critical coupling λ_crit = √(ω_a ω_b)/2 of the D = 0 model. Returns NaN on
 * NULL.
 *
 * # Safety
 * `model` must be a live handle or NULL.
 */
double dp_lambda_crit(const struct DpModel *model);

/**
 * Two-mode quantum Fisher information H(D) of the ground state.
 *
 * # Safety
 * `model` must be a live handle; `out` must be writable.
 */
enum DpStatus dp_qfi_two_mode(const struct DpModel *model, double *out);

/**
 * Single-mode (reduced state of mode a) QFI H_a(D).
 *
 * # Safety
 * `model` must be a live handle; `out` must be writable.
 */
enum DpStatus dp_qfi_single_mode(const struct DpModel *model, double *out);

/**
 * Homodyne Fisher information at measurement angle `phi`.
 *
 * # Safety
 * `model` must be a live handle; `out` must be writable.
 */
enum DpStatus dp_homodyne_fi(const struct DpModel *model, double phi, double *out);

/**
 * Photon-counting Fisher information. `max_cutoff` caps the Fock ladder
 * (pass 0 for the default ceiling); the cutoff actually used is returned in
 * `out_cutoff` when non-NULL.
 *
 * # Safety
 * `model` must be a live handle; `out` must be writable; `out_cutoff` may be
 * NULL.
 */
enum DpStatus dp_photon_counting_fi(const struct DpModel *model,
                                    unsigned int max_cutoff,
                                    double *out,
                                    unsigned int *out_cutoff);

/**
 * Full estimation report. Set `include_photon_counting` to 0 to skip the
 * Fock-space part (its fields come back as NaN).
 *
 * # Safety
 * `model` must be a live handle; `out` must point to a `DpEstimationReport`.
 */
enum DpStatus dp_estimation_report(const struct DpModel *model,
                                   int include_photon_counting,
                                   unsigned int max_cutoff,
                                   struct DpEstimationReport *out);

/**
 * Ground-state covariance in the (x_a, y_a, x_b, y_b) basis, written
 * row-major into `out[16]`.
 *
 * # Safety
 * `model` must be a live handle; `out` must point to 16 writable doubles.
 */
enum DpStatus dp_ground_state_covariance(const struct DpModel *model, double *out);

/**
 * Helstrom bound for discriminating the two handles' ground states
 * (collective two-mode measurement).
 *
 * # Safety
 * Both handles must be live; `out` must be writable.
 */
enum DpStatus dp_helstrom_two_mode(const struct DpModel *model0,
                                   const struct DpModel *model1,
                                   double *out);

/**
 * Helstrom bound on the reduced mode-a states, computed in a truncated Fock
 * space; `max_cutoff = 0` uses the default ceiling.
 *
 * # Safety
 * Both handles must be live; `out` must be writable; `out_cutoff` may be NULL.
 */
enum DpStatus dp_helstrom_single_mode(const struct DpModel *model0,
                                      const struct DpModel *model1,
                                      unsigned int max_cutoff,
                                      double *out,
                                      unsigned int *out_cutoff);

/**
 * Short human-readable description of a status code; static storage, do not
 * free.
 */
const char *dp_status_message(enum DpStatus status);

/**
 * Library version as a static C string.
 */
const char *dp_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DICKE_PROBE_H */
