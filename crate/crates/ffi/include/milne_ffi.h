#ifndef MILNE_FFI_H
#define MILNE_FFI_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum MilneStatus {
  MILNE_STATUS_OK = 0,
  MILNE_STATUS_NULL_POINTER = 1,
  MILNE_STATUS_INVALID_UTF8 = 2,
  MILNE_STATUS_PARSE = 3,
  MILNE_STATUS_VALIDATION = 4,
  MILNE_STATUS_INVALID_PROFILE = 5,
  MILNE_STATUS_DOMAIN = 6,
  MILNE_STATUS_SINGULARITY = 7,
  MILNE_STATUS_INSUFFICIENT_DATA = 8,
  MILNE_STATUS_INVALID_ARGUMENT = 9,
  MILNE_STATUS_NOT_COMPUTED = 10,
  MILNE_STATUS_IO = 11,
  MILNE_STATUS_BUFFER_TOO_SMALL = 12,
  MILNE_STATUS_PANIC = 13,
} MilneStatus;

typedef enum MilneSolverStatus {
  MILNE_SOLVER_STATUS_COMPLETED = 0,
  MILNE_SOLVER_STATUS_ABORTED_BLOWUP = 1,
  MILNE_SOLVER_STATUS_ABORTED_STEP_LIMIT = 2,
  /**
   * Nothing in the scenario required integrating the pressure equation.
   */
  MILNE_SOLVER_STATUS_NOT_RUN = 3,
} MilneSolverStatus;

typedef enum MilneProduct {
  MILNE_PRODUCT_TRAJECTORY = 0,
  MILNE_PRODUCT_SUMMARY = 1,
  MILNE_PRODUCT_ENVELOPE = 2,
  MILNE_PRODUCT_TRANSITION = 3,
  MILNE_PRODUCT_SPECTRUM = 4,
  MILNE_PRODUCT_BATHYMETRY = 5,
} MilneProduct;

/**
 * Opaque validated scenario.
 */
typedef struct MilneConfig MilneConfig;

/**
 * Opaque scenario result.
 */
typedef struct MilneResult MilneResult;

typedef struct MilneSummary {
  double e_m;
  double tau;
  double delta;
  bool e_m_bound_violated;
} MilneSummary;

typedef struct MilneEnvelope {
  double t;
  double q_squared;
  double magnitude;
  bool imaginary_branch;
} MilneEnvelope;

/**
 * Row-major 2x2 matrix `[m11, m12, m21, m22]`.
 */
typedef struct MilneMatrix2 {
  double m[4];
} MilneMatrix2;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null if none. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *milne_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *milne_version(void);

/**
 * Parses and validates a JSON scenario document.
 */
enum MilneStatus milne_config_load(const char *json, struct MilneConfig **out);

/**
 * Copy of `config` with a different seed.
 */
enum MilneStatus milne_config_with_seed(const struct MilneConfig *config,
                                        uint64_t seed,
                                        struct MilneConfig **out);

void milne_config_free(struct MilneConfig *config);

/**
 * Runs the full pipeline. A solver blow-up still yields a result; inspect
 * [`milne_result_solver_status`].
 */
enum MilneStatus milne_run(const struct MilneConfig *config, struct MilneResult **out);

void milne_result_free(struct MilneResult *result);

/**
 * Solver status and the time of the last finite sample (NaN when there is none).
 */
enum MilneStatus milne_result_solver_status(const struct MilneResult *result,
                                            enum MilneSolverStatus *status,
                                            double *last_finite_time);

/**
 * The `E_M`, `tau`, `delta` used for the envelope and transition products.
 */
enum MilneStatus milne_result_summary(const struct MilneResult *result, struct MilneSummary *out);

/**
 * Copies the trajectory into caller buffers of `capacity` elements each.
 *
 * `len` always receives the sample count. Pass null buffers with capacity 0 to query
 * it; a short buffer returns `BufferTooSmall` without copying.
 */
enum MilneStatus milne_result_trajectory(const struct MilneResult *result,
                                         double *t,
                                         double *p,
                                         double *p_dot,
                                         size_t capacity,
                                         size_t *len);

/**
 * Writes one product as CSV to `path`.
 */
enum MilneStatus milne_result_export_csv(const struct MilneResult *result,
                                         enum MilneProduct product,
                                         const char *path);

/**
 * Writes the JSON run summary to `path`.
 */
enum MilneStatus milne_result_export_json(const struct MilneResult *result, const char *path);

/**
 * Sea-surface spectral density at wavenumber `k` with the standard constants.
 */
enum MilneStatus milne_surface_psd(double wind_speed, double k, double *out);

enum MilneStatus milne_psd_peak_wavenumber(double wind_speed, double *out);

/**
 * Envelope at time `t` in the medium of `config`.
 */
enum MilneStatus milne_envelope(const struct MilneConfig *config,
                                double e_m,
                                double tau,
                                double t,
                                struct MilneEnvelope *out);

/**
 * Both transition-matrix forms at time `t` and their largest elementwise difference.
 * Any of the out-pointers may be null.
 */
enum MilneStatus milne_transition(const struct MilneConfig *config,
                                  double e_m,
                                  double delta,
                                  double tau,
                                  double t,
                                  struct MilneMatrix2 *composed,
                                  struct MilneMatrix2 *expanded,
                                  double *discrepancy);

/**
 * `D = [[cos tau, -sin tau], [sin tau, cos tau]]`
 */
enum MilneStatus milne_rotation(double tau, struct MilneMatrix2 *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MILNE_FFI_H */
