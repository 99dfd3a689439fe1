#ifndef STRONGTHERM_H
#define STRONGTHERM_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>

#define ST_OK 0

#define ST_ERR_NULL 1

#define ST_ERR_DOMAIN 2

#define ST_ERR_CONVERGENCE 3

#define ST_ERR_OUT_OF_REGIME 4

#define ST_ERR_POLE 5

#define ST_ERR_CONFIG 6

#define ST_ERR_IO 7

#define ST_ERR_PANIC 8

#define ST_POTENTIAL_POWER 0

#define ST_POTENTIAL_COSH 1

#define ST_MODE_PAPER 0

#define ST_MODE_DERIVED 1

#define ST_VARIANT_PRINTED 0

#define ST_VARIANT_RESTORED 1

#define ST_ROUTE_DIRECT_SERIES 0

#define ST_ROUTE_INTEGRAL_CONTINUATION 1

#define ST_ROUTE_CLOSED_FORM 2

/**
 * Opaque oscillator model.
 */
typedef struct StModel StModel;

typedef struct StZetaValue {
  double value;
  double abs_error_estimate;
  /**
   * One of the `ST_ROUTE_*` constants.
   */
  int route;
} StZetaValue;

typedef struct StThermo {
  double ln_z;
  double z;
  double free_energy;
  double mean_energy;
} StThermo;

typedef struct StOracleThermo {
  double ln_z;
  double free_energy;
  double mean_energy;
  double truncation_bound;
  size_t basis_size;
  double basis_frequency;
} StOracleThermo;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread; empty after a
 * success. Valid until the next library call on the same thread.
 */
const char *st_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *st_version(void);

/**
 * Creates a power-law model `ω²x²/2 + λx^{2p}/(2p)!`.
 */
int st_model_new(double omega, double lambda, double sigma, uint32_t p, struct StModel **out);

/**
 * Switches the interaction shape (`ST_POTENTIAL_*`).
 */
int st_model_set_potential(struct StModel *model, int kind);

/**
 * Releases a model. Null is ignored.
 */
void st_model_free(struct StModel *model);

/**
 * `ζ(s, ν)` by the direct lattice sum (s > 1/2).
 */
int st_epstein_series(double s, double nu, double tol, struct StZetaValue *out);

/**
 * `ζ(s, ν)` by analytic continuation (s < 1).
 */
int st_epstein_continued(double s, double nu, double tol, struct StZetaValue *out);

/**
 * `∂ζ(s, ν)/∂s` at s = 0.
 */
int st_epstein_ds_at_zero(double nu, double *out);

/**
 * Zeta function of `-d²/dτ² + (1-σ)ω²` on the circle of length β.
 */
int st_operator_zeta(double s,
                     double beta,
                     double omega,
                     double sigma,
                     double tol,
                     struct StZetaValue *out);

/**
 * Leading-order strong-coupling thermodynamics (`ST_MODE_*`).
 */
int st_strong_thermo(const struct StModel *model, double beta, int mode, struct StThermo *out);

/**
 * First-order weak-coupling thermodynamics (`ST_VARIANT_*`).
 */
int st_weak_thermo(const struct StModel *model, double beta, int variant, struct StThermo *out);

/**
 * Exact-diagonalization thermodynamics. `basis_size = 0` chooses the
 * basis automatically and ignores `basis_frequency`.
 */
int st_oracle_thermo(const struct StModel *model,
                     double beta,
                     double tol,
                     size_t basis_size,
                     double basis_frequency,
                     struct StOracleThermo *out);

/**
 * Comparison of all methods at one point as a JSON report document.
 * The string must be released with `st_string_free`.
 */
int st_compare_json(const struct StModel *model, double beta, char **out);

/**
 * Releases a string returned by the library. Null is ignored.
 */
void st_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STRONGTHERM_H */
