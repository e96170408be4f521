#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "brownruin/brownruin.h"

namespace {

struct Params {
  br_params* h = nullptr;
  Params(double mu1, double mu2, double rho) {
    REQUIRE(br_params_create(mu1, mu2, rho, &h) == BR_OK);
  }
  ~Params() { br_params_destroy(h); }
};

}  // namespace

TEST_CASE("params lifecycle and errors") {
  br_params* h = nullptr;
  CHECK(br_params_create(2, 1, 0, &h) == BR_ERR_DOMAIN);
  CHECK(h == nullptr);
  CHECK(std::string(br_last_error()).find("sort") != std::string::npos);
  CHECK(br_params_create(1, 2, 1.5, &h) == BR_ERR_CORRELATION_RANGE);
  CHECK(br_params_create(-1, 2, 0, &h) == BR_ERR_NONPOSITIVE_DRIFT);
  CHECK(br_params_create(1, 2, 0, nullptr) == BR_ERR_INVALID_ARGUMENT);

  Params p(1, 2, 0.5);
  double mu1 = 0, mu2 = 0, rho = 0;
  CHECK(br_params_get(p.h, &mu1, &mu2, &rho) == BR_OK);
  CHECK(mu1 == 1);
  CHECK(mu2 == 2);
  CHECK(rho == 0.5);
  br_params_destroy(nullptr);

  CHECK(std::string(br_status_name(BR_ERR_BOUNDARY_HIT)) == "BoundaryHit");
  CHECK(std::string(br_version()).size() > 0);
}

TEST_CASE("null arguments are rejected") {
  Params p(1, 2, 0.5);
  br_asymptotics a;
  double g = 0;
  CHECK(br_dominating_points(nullptr, &a) == BR_ERR_INVALID_ARGUMENT);
  CHECK(br_dominating_points(p.h, nullptr) == BR_ERR_INVALID_ARGUMENT);
  CHECK(br_g_qp(nullptr, 1, 1, &g) == BR_ERR_INVALID_ARGUMENT);
  CHECK(br_simulate(p.h, nullptr, nullptr) == BR_ERR_INVALID_ARGUMENT);
  CHECK(br_profile_slice(p.h, BR_SLICE_DIAGONAL, 0, 1, 2, 3, nullptr, nullptr) ==
        BR_ERR_INVALID_ARGUMENT);
}

TEST_CASE("asymptotics through the C API") {
  Params p(1, 2, -0.5);
  br_asymptotics a;
  REQUIRE(br_dominating_points(p.h, &a) == BR_OK);
  CHECK(a.regime == BR_REGIME_NEG_RHO);
  CHECK(a.n_minimizers == 1);
  CHECK(a.minimizer_t[0] == doctest::Approx(2));
  CHECK(a.minimizer_s[0] == doctest::Approx(1.0 / 3));
  CHECK(a.gamma == doctest::Approx(8));
  CHECK(!a.has_segment);

  Params q(1, 2, 0.9);
  REQUIRE(br_dominating_points(q.h, &a) == BR_OK);
  CHECK(a.has_segment);
  CHECK(a.segment_s == 0.5);
  double gamma = 0;
  CHECK(br_adjustment_coefficient(q.h, &gamma) == BR_OK);
  CHECK(gamma == 4);
  br_regime r;
  CHECK(br_classify_regime(q.h, &r) == BR_OK);
  CHECK(std::string(br_regime_case(r)) == "vi");
  CHECK(std::string(br_regime_name(r)) == "SUPER_RHO2");

  br_objective_value v;
  CHECK(br_g_closed(q.h, 0, 1, &v) == BR_ERR_NONPOSITIVE_TIME);
  CHECK(std::string(br_last_error()).size() > 0);
  br_critical_values cv;
  CHECK(br_critical_values_get(q.h, &cv) == BR_OK);
  CHECK(cv.rho_hat_2 == 0.75);
}

TEST_CASE("qp and oracle through the C API") {
  br_qp_solution s;
  REQUIRE(br_qp_solve(1, 0.9, 1, 1, 0.5, &s) == BR_OK);
  CHECK(s.active_set == BR_ACTIVE_FIRST);
  CHECK(s.x2 == doctest::Approx(0.9));
  CHECK(br_qp_solve(1, 1, 1, 1, 1, &s) == BR_ERR_NOT_POSITIVE_DEFINITE);
  CHECK(br_qp_solve(1, 0, 1, -1, -1, &s) == BR_ERR_INFEASIBLE_B);

  Params p(1, 1, 0);
  br_oracle_result o;
  REQUIRE(br_oracle_minimize(p.h, nullptr, &o) == BR_OK);
  CHECK(o.min_value == doctest::Approx(8).epsilon(1e-6));
  br_oracle_config cfg = br_oracle_config_default();
  CHECK(cfg.initial_grid == 400);
  cfg.zoom_factor = 2;
  CHECK(br_oracle_minimize(p.h, &cfg, &o) == BR_ERR_CONFIG);

  std::vector<double> x(3), y(3);
  CHECK(br_profile_slice(p.h, BR_SLICE_DIAGONAL, 0, 0.5, 1.5, 3, x.data(),
                         y.data()) == BR_OK);
  CHECK(y[1] == doctest::Approx(8));
}

TEST_CASE("simulation through the C API") {
  Params p(1, 1, 0);
  br_sim_config cfg = br_sim_config_default();
  CHECK(cfg.bridge_correction == 1);
  CHECK(cfg.antithetic == 1);
  cfg.u = 0.5;
  cfg.n_paths = 1000;
  cfg.dt = 5e-3;
  br_mc_estimate e;
  REQUIRE(br_simulate(p.h, &cfg, &e) == BR_OK);
  CHECK(e.n_paths == 1000);
  CHECK(e.p_hat == static_cast<double>(e.n_joint_hits) / 1000);
  cfg.n_paths = 10;
  CHECK(br_simulate(p.h, &cfg, &e) == BR_ERR_CONFIG);

  cfg.n_paths = 1000;
  const double us[] = {0.5, 0.75};
  br_mc_estimate ladder[2];
  REQUIRE(br_slope_ladder(p.h, us, 2, &cfg, ladder) == BR_OK);
  double slope = 0, intercept = 0;
  int used = 0;
  CHECK(br_fit_log_slope(ladder, 2, &slope, &intercept, &used) == BR_OK);
  CHECK(used == 2);
  CHECK(br_slope_ladder(p.h, us, 0, &cfg, ladder) == BR_ERR_CONFIG);
}

TEST_CASE("verify through the C API") {
  int rows = 0;
  int all = 0;
  auto cb = [](const char*, int, const char*, double, void* ctx) {
    ++*static_cast<int*>(ctx);
  };
  REQUIRE(br_verify(0, cb, &rows, &all) == BR_OK);
  CHECK(all == 1);
  CHECK(rows == 6);
}
