/*
 * brownruin C API.
 *
 * Adjustment coefficient, dominating points and Monte Carlo estimates for
 * component-wise ruin of two correlated Brownian business lines
 *
 *     R_i(t) = u + mu_i t - X_i(t),   i = 1, 2,   corr(X_1, X_2) = rho.
 *
 * Every function returns a br_status; BR_OK is zero. On failure the
 * message for the calling thread is available from br_last_error() until
 * the next failing call on that thread. Output structs are only written on
 * success. Model parameters live behind the opaque br_params handle.
 */
#ifndef BROWNRUIN_H
#define BROWNRUIN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(BROWNRUIN_BUILDING)
#    define BR_API __declspec(dllexport)
#  else
#    define BR_API __declspec(dllimport)
#  endif
#else
#  define BR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum br_status {
  BR_OK = 0,
  BR_ERR_DOMAIN = 1,              /* mu1 > mu2 */
  BR_ERR_NONPOSITIVE_DRIFT = 2,
  BR_ERR_CORRELATION_RANGE = 3,
  BR_ERR_NONPOSITIVE_TIME = 4,
  BR_ERR_NOT_POSITIVE_DEFINITE = 5,
  BR_ERR_INFEASIBLE_B = 6,
  BR_ERR_BOX_DEGENERATE = 7,
  BR_ERR_BOUNDARY_HIT = 8,
  BR_ERR_CONFIG = 9,
  BR_ERR_INVALID_ARGUMENT = 10,
  BR_ERR_INTERNAL = 99
} br_status;

BR_API const char* br_version(void);
BR_API const char* br_last_error(void);
BR_API const char* br_status_name(br_status status);

/* ---- model ------------------------------------------------------------ */

typedef struct br_params br_params;

/* Rejects mu1 > mu2 with BR_ERR_DOMAIN; callers sort the lines first. */
BR_API br_status br_params_create(double mu1, double mu2, double rho,
                                  br_params** out);
BR_API void br_params_destroy(br_params* params);
BR_API br_status br_params_get(const br_params* params, double* mu1,
                               double* mu2, double* rho);

/* Undefined quantities are +INFINITY. */
typedef struct br_critical_values {
  double rho_hat_1;
  double rho_hat_2;
  double rho_hat;
  double t_star;
  double s_star;
  double s1_star;
  double s_double_star;
  double t_double_star;
  double t_A;
  double s_A;
  double t_B;
  double s_B;
} br_critical_values;

BR_API br_status br_critical_values_get(const br_params* params,
                                        br_critical_values* out);

typedef enum br_half { BR_HALF_A = 0, BR_HALF_L = 1, BR_HALF_B = 2 } br_half;
typedef enum br_subregion { BR_D1 = 0, BR_D2 = 1 } br_subregion;

typedef struct br_region {
  br_half half;
  br_subregion sub;
} br_region;

BR_API br_status br_classify_point(const br_params* params, double t,
                                   double s, br_region* out);

typedef struct br_boundary_curves {
  double f1, f2, w1, w2, h1, h2, w1_inverse;
} br_boundary_curves;

BR_API br_status br_boundary_curves_at(const br_params* params, double x,
                                       br_boundary_curves* out);

/* ---- quadratic program ------------------------------------------------ */

typedef enum br_active_set {
  BR_ACTIVE_FIRST = 1,
  BR_ACTIVE_SECOND = 2,
  BR_ACTIVE_BOTH = 3
} br_active_set;

typedef struct br_qp_solution {
  double x1, x2;
  br_active_set active_set;
  double value;
} br_qp_solution;

/* min x^T M^{-1} x subject to x >= (b1, b2), M = [[m11, m12], [m12, m22]]. */
BR_API br_status br_qp_solve(double m11, double m12, double m22, double b1,
                             double b2, br_qp_solution* out);

/* ---- objective -------------------------------------------------------- */

typedef enum br_representation {
  BR_REPR_G3_A = 0,
  BR_REPR_G3_B = 1,
  BR_REPR_G_L = 2,
  BR_REPR_G2_ON_D2 = 3
} br_representation;

typedef struct br_objective_value {
  double value;
  br_representation representation;
  br_region region;
} br_objective_value;

BR_API br_status br_g_qp(const br_params* params, double t, double s,
                         double* out);
BR_API br_status br_g_closed(const br_params* params, double t, double s,
                             br_objective_value* out);

/* ---- closed-form asymptotics ----------------------------------------- */

typedef enum br_regime {
  BR_REGIME_NEG_RHO = 0,    /* case (i)   */
  BR_REGIME_SUB_RHO1 = 1,   /* case (ii)  */
  BR_REGIME_AT_RHO1 = 2,    /* case (iii) */
  BR_REGIME_MID = 3,        /* case (iv)  */
  BR_REGIME_AT_RHO2 = 4,    /* case (v)   */
  BR_REGIME_SUPER_RHO2 = 5  /* case (vi)  */
} br_regime;

BR_API const char* br_regime_name(br_regime regime);
BR_API const char* br_regime_case(br_regime regime);

typedef struct br_asymptotics {
  br_regime regime;
  int boundary;          /* rho on a critical correlation */
  int n_minimizers;      /* 1 or 2 */
  double minimizer_t[2];
  double minimizer_s[2];
  int has_segment;       /* case (vi): minimum along s = segment_s */
  double segment_s;
  double segment_t_lo;
  double segment_t_hi;
  double g_min;
  double gamma;
} br_asymptotics;

BR_API br_status br_classify_regime(const br_params* params, br_regime* out);
BR_API br_status br_dominating_points(const br_params* params,
                                      br_asymptotics* out);
BR_API br_status br_adjustment_coefficient(const br_params* params,
                                           double* out);

/* ---- grid oracle ------------------------------------------------------ */

typedef struct br_oracle_config {
  double t_max_multiplier;
  int initial_grid;
  int refinement_rounds;
  double zoom_factor;
  unsigned threads; /* 0: hardware concurrency */
} br_oracle_config;

typedef struct br_oracle_result {
  double arg_min_t, arg_min_s;
  double min_value;
  long long evaluations;
  double box_t_lo, box_t_hi, box_s_lo, box_s_hi;
} br_oracle_result;

BR_API br_oracle_config br_oracle_config_default(void);
BR_API br_status br_oracle_minimize(const br_params* params,
                                    const br_oracle_config* config,
                                    br_oracle_result* out);

typedef enum br_slice_axis {
  BR_SLICE_T_FIXED = 0,
  BR_SLICE_S_FIXED = 1,
  BR_SLICE_DIAGONAL = 2
} br_slice_axis;

/* Fills n coordinates and values; both arrays must hold n doubles. */
BR_API br_status br_profile_slice(const br_params* params, br_slice_axis axis,
                                  double fixed, double lo, double hi, size_t n,
                                  double* coordinates, double* values);

/* ---- Monte Carlo ------------------------------------------------------ */

typedef struct br_sim_config {
  double u;
  int64_t n_paths;
  double dt;
  double horizon_multiplier;
  uint64_t seed;
  int antithetic;
  unsigned threads;
  double prune_tolerance;
  int importance_sampling;
  int bridge_correction; /* sample the between-grid maximum of each line */
} br_sim_config;

typedef struct br_mc_estimate {
  double u;
  int64_t n_paths;
  double p_hat;
  double ci_halfwidth_95;
  double log_slope;          /* NaN when p_hat == 0 */
  int64_t n_joint_hits;
  int64_t marginal_hits[2];
  double marginal_p_hat[2];
  double ks_distance[2];
  double sup_correlation;
  int importance_sampling;
} br_mc_estimate;

BR_API br_sim_config br_sim_config_default(void);
BR_API br_status br_simulate(const br_params* params,
                             const br_sim_config* config,
                             br_mc_estimate* out);

/* out must hold n estimates; level k uses seed config->seed + k. */
BR_API br_status br_slope_ladder(const br_params* params, const double* u,
                                 size_t n, const br_sim_config* config,
                                 br_mc_estimate* out);

/* Least-squares slope of -ln(p_hat) against u over cells with hits. */
BR_API br_status br_fit_log_slope(const br_mc_estimate* ladder, size_t n,
                                  double* slope, double* intercept,
                                  int* points_used);

/* ---- self verification ------------------------------------------------ */

typedef void (*br_check_callback)(const char* name, int passed,
                                  const char* detail, double seconds,
                                  void* context);

/* Runs the property suites (full != 0 selects the large sizes), reporting
 * each through callback. *all_passed is set to 1 iff every suite passed. */
BR_API br_status br_verify(int full, br_check_callback callback,
                           void* context, int* all_passed);

#ifdef __cplusplus
}
#endif

#endif /* BROWNRUIN_H */
