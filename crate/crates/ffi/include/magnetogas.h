#ifndef MAGNETOGAS_H
#define MAGNETOGAS_H

/* Generated with cbindgen:0.29.4 */

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MgStatus {
  MG_STATUS_OK = 0,
  MG_STATUS_POLE = 1,
  MG_STATUS_DOMAIN = 2,
  MG_STATUS_THRESHOLD_DIVERGENCE = 3,
  MG_STATUS_CAPACITY = 4,
  MG_STATUS_TOLERANCE_FAILURE = 5,
  MG_STATUS_TRUNCATION = 6,
  MG_STATUS_INVALID_INPUT = 7,
  MG_STATUS_NON_FINITE = 8,
  MG_STATUS_NULL_POINTER = 9,
  MG_STATUS_PANIC = 10,
} MgStatus;

typedef enum MgMethod {
  MG_METHOD_QUADRATURE = 0,
  MG_METHOD_SMALL_B_EXPANSION = 1,
  MG_METHOD_LARGE_FILLING_EXPANSION = 2,
  MG_METHOD_BRUTE_FORCE = 3,
  MG_METHOD_NON_RELATIVISTIC = 4,
  MG_METHOD_SOMMERFELD = 5,
  MG_METHOD_OSCILLATION_SERIES = 6,
} MgMethod;

typedef enum MgZetaStrategy {
  MG_ZETA_STRATEGY_RECURRENCE_ASYMPTOTIC = 0,
  MG_ZETA_STRATEGY_HERMITE_QUADRATURE = 1,
  MG_ZETA_STRATEGY_FOURIER = 2,
  MG_ZETA_STRATEGY_BERNOULLI_POLYNOMIAL = 3,
  MG_ZETA_STRATEGY_DIRECT_SERIES = 4,
} MgZetaStrategy;

typedef enum MgRegime {
  MG_REGIME_COLD = 0,
  MG_REGIME_COLD_SMALL_FIELD = 1,
  MG_REGIME_WARM = 2,
  MG_REGIME_NONDEGENERATE = 3,
} MgRegime;

typedef enum MgSelfMagnetizationMode {
  MG_SELF_MAGNETIZATION_MODE_TOTAL = 0,
  MG_SELF_MAGNETIZATION_MODE_ENVELOPE = 1,
} MgSelfMagnetizationMode;

/**
 * Opaque list of field values returned by the self-magnetization solver.
 */
typedef struct MgRootList MgRootList;

/**
 * Opaque Hurwitz zeta engine configuration.
 */
typedef struct MgZetaEngine MgZetaEngine;

typedef struct MgZetaValue {
  double value;
  double abs_error_estimate;
  int32_t strategy;
} MgZetaValue;

typedef struct MgHValue {
  double total;
  double monotonic;
  double oscillatory;
} MgHValue;

typedef struct MgThermoResult {
  double value;
  double monotonic;
  double oscillatory;
  double abs_error_estimate;
  /**
   * An `MgMethod` discriminant.
   */
  int32_t method;
  bool at_threshold;
} MgThermoResult;

typedef struct MgEnvelope {
  double lower;
  double upper;
} MgEnvelope;

typedef struct MgDensityInversion {
  double eps_f;
  bool near_threshold;
  size_t iterations;
} MgDensityInversion;

typedef struct MgRegimeLabel {
  /**
   * An `MgRegime` discriminant.
   */
  int32_t regime;
  double landau_spacing;
  double fermi_temperature;
} MgRegimeLabel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *mg_version(void);

/**
 * Length in bytes of the last error message on this thread, without the
 * terminating NUL; 0 when the last call succeeded.
 */
size_t mg_last_error_length(void);

/**
 * Copies the last error message into `buf` (NUL-terminated, truncated to
 * `len` bytes). Returns the number of bytes written without the NUL.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t mg_last_error_message(char *buf, size_t len);

/**
 * Creates an engine with the library defaults.
 *
 * # Safety
 * `out` must be null or writable.
 */
enum MgStatus mg_zeta_engine_new_default(struct MgZetaEngine **out);

/**
 * Creates an engine with explicit settings; fails with
 * `MG_STATUS_INVALID_INPUT` or `MG_STATUS_CAPACITY` when they are invalid.
 *
 * # Safety
 * `out` must be null or writable.
 */
enum MgStatus mg_zeta_engine_new(double shift_target,
                                 size_t asymptotic_terms,
                                 double quadrature_abs_tol,
                                 double quadrature_rel_tol,
                                 struct MgZetaEngine **out);

/**
 * Releases an engine. Null is ignored.
 *
 * # Safety
 * `engine` must come from `mg_zeta_engine_new*` and not be used afterwards.
 */
void mg_zeta_engine_free(struct MgZetaEngine *engine);

/**
 * ζ(z, q) with the engine's settings.
 *
 * # Safety
 * `engine` must be a live handle; `out` must be null or writable.
 */
enum MgStatus mg_zeta_engine_eval(const struct MgZetaEngine *engine,
                                  double z,
                                  double q,
                                  struct MgZetaValue *out);

/**
 * ∂ⁿζ(z, q)/∂qⁿ with the engine's settings.
 *
 * # Safety
 * `engine` must be a live handle; `out` must be null or writable.
 */
enum MgStatus mg_zeta_engine_q_derivative(const struct MgZetaEngine *engine,
                                          double z,
                                          double q,
                                          size_t order,
                                          double *out);

/**
 * ζ(z, q) with the default engine.
 *
 * # Safety
 * `out` must be null or writable.
 */
enum MgStatus mg_zeta(double z, double q, double *out);

/**
 * ℋ_z(q) and its split.
 *
 * # Safety
 * `out` must be null or writable.
 */
enum MgStatus mg_h_z(double z, double q, struct MgHValue *out);

/**
 * Number density at T = 0, units m³/2π².
 *
 * # Safety
 * `out` must be null or writable.
 */
enum MgStatus mg_number_density(double eps_f, double b, int32_t method, struct MgThermoResult *out);

/**
 * Grand potential density at T = 0, units m⁴/4π².
 *
 * # Safety
 * `out` must be null or writable.
 */
enum MgStatus mg_grand_potential(double eps_f,
                                 double b,
                                 int32_t method,
                                 struct MgThermoResult *out);

/**
 * Energy density at T = 0, units m⁴/4π².
 *
 * # Safety
 * `out` must be null or writable.
 */
enum MgStatus mg_energy_density(double eps_f, double b, int32_t method, struct MgThermoResult *out);

/**
 * Magnetization at T = 0, units e·m²/2π².
 *
 * # Safety
 * `out` must be null or writable.
 */
enum MgStatus mg_magnetization(double eps_f, double b, int32_t method, struct MgThermoResult *out);

/**
 * Envelope of the T = 0 magnetization oscillations.
 *
 * # Safety
 * `out` must be null or writable.
 */
enum MgStatus mg_magnetization_envelope_t0(double eps_f, double b, struct MgEnvelope *out);

/**
 * Fermi energy for density `n` (units m³/2π²) at field b.
 *
 * # Safety
 * `out` must be null or writable.
 */
enum MgStatus mg_fermi_energy_from_density(double n, double b, struct MgDensityInversion *out);

/**
 * Regime of (ε_F, b, T); `ratio` ≤ 0 selects the default threshold.
 *
 * # Safety
 * `out` must be null or writable.
 */
enum MgStatus mg_regime_classify(double eps_f,
                                 double b,
                                 double t,
                                 double ratio,
                                 struct MgRegimeLabel *out);

/**
 * Grand potential at temperature T from the damped oscillation series.
 *
 * # Safety
 * `out` must be null or writable.
 */
enum MgStatus mg_grand_potential_finite_t(double mu,
                                          double t,
                                          double b,
                                          struct MgThermoResult *out);

/**
 * Magnetization at temperature T.
 *
 * # Safety
 * `out` must be null or writable.
 */
enum MgStatus mg_magnetization_finite_t(double mu, double t, double b, struct MgThermoResult *out);

/**
 * Amplitude envelope of the magnetization oscillations at temperature T.
 *
 * # Safety
 * `out` must be null or writable.
 */
enum MgStatus mg_oscillation_envelope_t(double mu, double t, double b, double *out);

/**
 * Non-relativistic Landau magnetization at kinetic chemical potential `mu_nr`.
 *
 * # Safety
 * `out` must be null or writable.
 */
enum MgStatus mg_magnetization_landau(double mu_nr, double t, double b, double *out);

/**
 * Solves M(T, μ, b) = γB(b) for b in [b_lo, b_hi]. `mode` is an
 * `MgSelfMagnetizationMode` discriminant. The roots are returned in an
 * `MgRootList` owned by the caller.
 *
 * # Safety
 * `out` must be null or writable.
 */
enum MgStatus mg_self_magnetization_solve(double mu,
                                          double t,
                                          double gamma,
                                          double b_lo,
                                          double b_hi,
                                          int32_t mode,
                                          struct MgRootList **out);

/**
 * Number of roots in the list; 0 for null.
 *
 * # Safety
 * `list` must be null or a live handle.
 */
size_t mg_root_list_len(const struct MgRootList *list);

/**
 * Root `index` of the list.
 *
 * # Safety
 * `list` must be a live handle; `out` must be null or writable.
 */
enum MgStatus mg_root_list_get(const struct MgRootList *list, size_t index, double *out);

/**
 * Releases a root list. Null is ignored.
 *
 * # Safety
 * `list` must come from `mg_self_magnetization_solve` and not be used
 * afterwards.
 */
void mg_root_list_free(struct MgRootList *list);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MAGNETOGAS_H */
