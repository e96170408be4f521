#include "brownruin/brownruin.h"

#include <exception>
#include <string>
#include <vector>

#include "brownruin/closedform.hpp"
#include "brownruin/error.hpp"
#include "brownruin/model.hpp"
#include "brownruin/montecarlo.hpp"
#include "brownruin/objective.hpp"
#include "brownruin/oracle.hpp"
#include "brownruin/qp.hpp"
#include "brownruin/verify.hpp"

struct br_params {
  brownruin::ModelParams value;
};

namespace {

thread_local std::string last_error;

br_status fail(br_status status, const char* what) {
  last_error = what;
  return status;
}

template <class F>
br_status guarded(F&& body) {
  try {
    body();
    return BR_OK;
  } catch (const brownruin::Error& e) {
    return fail(static_cast<br_status>(e.code()), e.what());
  } catch (const std::exception& e) {
    return fail(BR_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(BR_ERR_INTERNAL, "unknown exception");
  }
}

#define BR_REQUIRE(cond, msg)                                 \
  do {                                                        \
    if (!(cond)) return fail(BR_ERR_INVALID_ARGUMENT, (msg)); \
  } while (0)

br_region to_c(const brownruin::Region& r) {
  return {static_cast<br_half>(r.half), static_cast<br_subregion>(r.sub)};
}

brownruin::OracleConfig from_c(const br_oracle_config& c) {
  brownruin::OracleConfig cfg;
  cfg.t_max_multiplier = c.t_max_multiplier;
  cfg.initial_grid = c.initial_grid;
  cfg.refinement_rounds = c.refinement_rounds;
  cfg.zoom_factor = c.zoom_factor;
  cfg.threads = c.threads;
  return cfg;
}

brownruin::SimConfig from_c(const br_sim_config& c) {
  brownruin::SimConfig cfg;
  cfg.u = c.u;
  cfg.n_paths = c.n_paths;
  cfg.dt = c.dt;
  cfg.horizon_multiplier = c.horizon_multiplier;
  cfg.seed = c.seed;
  cfg.antithetic = c.antithetic != 0;
  cfg.threads = c.threads;
  cfg.prune_tolerance = c.prune_tolerance;
  cfg.importance_sampling = c.importance_sampling != 0;
  cfg.bridge_correction = c.bridge_correction != 0;
  return cfg;
}

br_mc_estimate to_c(const brownruin::McEstimate& e) {
  br_mc_estimate out{};
  out.u = e.u;
  out.n_paths = e.n_paths;
  out.p_hat = e.p_hat;
  out.ci_halfwidth_95 = e.ci_halfwidth_95;
  out.log_slope = e.log_slope;
  out.n_joint_hits = e.n_joint_hits;
  for (int i = 0; i < 2; ++i) {
    out.marginal_hits[i] = e.marginal_hits[i];
    out.marginal_p_hat[i] = e.marginal_p_hat[i];
    out.ks_distance[i] = e.ks_distance[i];
  }
  out.sup_correlation = e.sup_correlation;
  out.importance_sampling = e.importance_sampling ? 1 : 0;
  return out;
}

}  // namespace

extern "C" {

const char* br_version(void) { return BROWNRUIN_VERSION; }

const char* br_last_error(void) { return last_error.c_str(); }

const char* br_status_name(br_status status) {
  if (status == BR_OK) return "OK";
  if (status == BR_ERR_INTERNAL) return "InternalError";
  return brownruin::error_code_name(static_cast<brownruin::ErrorCode>(status));
}

br_status br_params_create(double mu1, double mu2, double rho,
                           br_params** out) {
  BR_REQUIRE(out, "out must not be null");
  return guarded([&] {
    *out = new br_params{brownruin::make_params(mu1, mu2, rho)};
  });
}

void br_params_destroy(br_params* params) { delete params; }

br_status br_params_get(const br_params* params, double* mu1, double* mu2,
                        double* rho) {
  BR_REQUIRE(params, "params must not be null");
  if (mu1) *mu1 = params->value.mu1();
  if (mu2) *mu2 = params->value.mu2();
  if (rho) *rho = params->value.rho();
  return BR_OK;
}

br_status br_critical_values_get(const br_params* params,
                                 br_critical_values* out) {
  BR_REQUIRE(params && out, "params and out must not be null");
  return guarded([&] {
    const auto cv = brownruin::critical_values(params->value);
    *out = {cv.rho_hat_1, cv.rho_hat_2,     cv.rho_hat,       cv.t_star,
            cv.s_star,    cv.s1_star,       cv.s_double_star, cv.t_double_star,
            cv.t_A,       cv.s_A,           cv.t_B,           cv.s_B};
  });
}

br_status br_classify_point(const br_params* params, double t, double s,
                            br_region* out) {
  BR_REQUIRE(params && out, "params and out must not be null");
  return guarded(
      [&] { *out = to_c(brownruin::classify_point(params->value, t, s)); });
}

br_status br_boundary_curves_at(const br_params* params, double x,
                                br_boundary_curves* out) {
  BR_REQUIRE(params && out, "params and out must not be null");
  BR_REQUIRE(x > 0.0, "curve argument must be positive");
  return guarded([&] {
    const auto c = brownruin::boundary_curves(params->value, x);
    *out = {c.f1, c.f2, c.w1, c.w2, c.h1, c.h2, c.w1_inverse};
  });
}

br_status br_qp_solve(double m11, double m12, double m22, double b1, double b2,
                      br_qp_solution* out) {
  BR_REQUIRE(out, "out must not be null");
  return guarded([&] {
    const auto sol = brownruin::solve_qp({m11, m12, m22}, {b1, b2});
    *out = {sol.solution[0], sol.solution[1],
            static_cast<br_active_set>(sol.active_set), sol.value};
  });
}

br_status br_g_qp(const br_params* params, double t, double s, double* out) {
  BR_REQUIRE(params && out, "params and out must not be null");
  return guarded([&] { *out = brownruin::g_qp(params->value, t, s); });
}

br_status br_g_closed(const br_params* params, double t, double s,
                      br_objective_value* out) {
  BR_REQUIRE(params && out, "params and out must not be null");
  return guarded([&] {
    const auto v = brownruin::g_closed(params->value, t, s);
    *out = {v.value, static_cast<br_representation>(v.representation),
            to_c(v.region)};
  });
}

const char* br_regime_name(br_regime regime) {
  return brownruin::regime_name(static_cast<brownruin::Regime>(regime));
}

const char* br_regime_case(br_regime regime) {
  return brownruin::regime_case(static_cast<brownruin::Regime>(regime));
}

br_status br_classify_regime(const br_params* params, br_regime* out) {
  BR_REQUIRE(params && out, "params and out must not be null");
  return guarded([&] {
    *out = static_cast<br_regime>(brownruin::classify_regime(params->value));
  });
}

br_status br_dominating_points(const br_params* params, br_asymptotics* out) {
  BR_REQUIRE(params && out, "params and out must not be null");
  return guarded([&] {
    const auto r = brownruin::dominating_points(params->value);
    br_asymptotics a{};
    a.regime = static_cast<br_regime>(r.regime);
    a.boundary = r.boundary ? 1 : 0;
    a.n_minimizers = static_cast<int>(r.minimizers.size());
    for (int i = 0; i < a.n_minimizers && i < 2; ++i) {
      a.minimizer_t[i] = r.minimizers[i].t;
      a.minimizer_s[i] = r.minimizers[i].s;
    }
    if (r.segment) {
      a.has_segment = 1;
      a.segment_s = r.segment->s_fixed;
      a.segment_t_lo = r.segment->t_lo;
      a.segment_t_hi = r.segment->t_hi;
    }
    a.g_min = r.g_min;
    a.gamma = r.gamma;
    *out = a;
  });
}

br_status br_adjustment_coefficient(const br_params* params, double* out) {
  BR_REQUIRE(params && out, "params and out must not be null");
  return guarded(
      [&] { *out = brownruin::adjustment_coefficient(params->value); });
}

br_oracle_config br_oracle_config_default(void) {
  const brownruin::OracleConfig d;
  return {d.t_max_multiplier, d.initial_grid, d.refinement_rounds,
          d.zoom_factor, d.threads};
}

br_status br_oracle_minimize(const br_params* params,
                             const br_oracle_config* config,
                             br_oracle_result* out) {
  BR_REQUIRE(params && out, "params and out must not be null");
  return guarded([&] {
    const brownruin::OracleConfig cfg =
        config ? from_c(*config) : brownruin::OracleConfig{};
    const auto r = brownruin::grid_minimize(params->value, cfg);
    *out = {r.arg_min.t,      r.arg_min.s,      r.min_value,
            r.evaluations,    r.box_used.t_lo,  r.box_used.t_hi,
            r.box_used.s_lo,  r.box_used.s_hi};
  });
}

br_status br_profile_slice(const br_params* params, br_slice_axis axis,
                           double fixed, double lo, double hi, size_t n,
                           double* coordinates, double* values) {
  BR_REQUIRE(params && coordinates && values,
             "params and output arrays must not be null");
  return guarded([&] {
    const auto pts = brownruin::profile_slice(
        params->value, static_cast<brownruin::SliceAxis>(axis), fixed, lo, hi,
        n);
    for (size_t i = 0; i < pts.size(); ++i) {
      coordinates[i] = pts[i].coordinate;
      values[i] = pts[i].value;
    }
  });
}

br_sim_config br_sim_config_default(void) {
  const brownruin::SimConfig d;
  return {d.u,
          d.n_paths,
          d.dt,
          d.horizon_multiplier,
          d.seed,
          d.antithetic ? 1 : 0,
          d.threads,
          d.prune_tolerance,
          d.importance_sampling ? 1 : 0,
          d.bridge_correction ? 1 : 0};
}

br_status br_simulate(const br_params* params, const br_sim_config* config,
                      br_mc_estimate* out) {
  BR_REQUIRE(params && config && out, "params, config and out must not be null");
  return guarded([&] {
    *out = to_c(brownruin::simulate(params->value, from_c(*config)));
  });
}

br_status br_slope_ladder(const br_params* params, const double* u, size_t n,
                          const br_sim_config* config, br_mc_estimate* out) {
  BR_REQUIRE(params && config && out, "params, config and out must not be null");
  BR_REQUIRE(u || n == 0, "u must not be null");
  return guarded([&] {
    const auto ladder = brownruin::slope_ladder(
        params->value, std::span<const double>(u, n), from_c(*config));
    for (size_t i = 0; i < ladder.size(); ++i) out[i] = to_c(ladder[i].estimate);
  });
}

br_status br_fit_log_slope(const br_mc_estimate* ladder, size_t n,
                           double* slope, double* intercept, int* points_used) {
  BR_REQUIRE(ladder || n == 0, "ladder must not be null");
  BR_REQUIRE(slope, "slope must not be null");
  return guarded([&] {
    std::vector<brownruin::LadderPoint> pts;
    pts.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      brownruin::McEstimate e{};
      e.u = ladder[i].u;
      e.p_hat = ladder[i].p_hat;
      pts.push_back({ladder[i].u, e});
    }
    const auto fit = brownruin::fit_log_slope(pts);
    *slope = fit.slope;
    if (intercept) *intercept = fit.intercept;
    if (points_used) *points_used = fit.points_used;
  });
}

br_status br_verify(int full, br_check_callback callback, void* context,
                    int* all_passed) {
  BR_REQUIRE(all_passed, "all_passed must not be null");
  return guarded([&] {
    const auto results = brownruin::run_verification(
        full ? brownruin::VerifyLevel::kFull : brownruin::VerifyLevel::kQuick,
        [&](const brownruin::CheckResult& r) {
          if (callback) {
            callback(r.name.c_str(), r.passed ? 1 : 0, r.detail.c_str(),
                     r.seconds, context);
          }
        });
    bool ok = true;
    for (const auto& r : results) ok = ok && r.passed;
    *all_passed = ok ? 1 : 0;
  });
}

}  // extern "C"
