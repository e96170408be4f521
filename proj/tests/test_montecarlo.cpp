#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "brownruin/error.hpp"
#include "brownruin/montecarlo.hpp"

using namespace brownruin;

namespace {

SimConfig small(double u, std::int64_t n, double dt) {
  SimConfig cfg;
  cfg.u = u;
  cfg.n_paths = n;
  cfg.dt = dt;
  return cfg;
}

bool same_bits(const McEstimate& a, const McEstimate& b) {
  auto eq = [](double x, double y) {
    return std::memcmp(&x, &y, sizeof x) == 0;
  };
  return eq(a.p_hat, b.p_hat) && eq(a.ci_halfwidth_95, b.ci_halfwidth_95) &&
         eq(a.log_slope, b.log_slope) && a.n_joint_hits == b.n_joint_hits &&
         a.marginal_hits == b.marginal_hits &&
         eq(a.marginal_p_hat[0], b.marginal_p_hat[0]) &&
         eq(a.marginal_p_hat[1], b.marginal_p_hat[1]) &&
         eq(a.ks_distance[0], b.ks_distance[0]) &&
         eq(a.ks_distance[1], b.ks_distance[1]) &&
         eq(a.sup_correlation, b.sup_correlation);
}

ErrorCode config_error(const SimConfig& cfg) {
  try {
    validate(cfg);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST_CASE("simulation config errors") {
  CHECK(config_error(small(0, 1000, 1e-3)) == ErrorCode::kConfig);
  CHECK(config_error(small(1, 99, 1e-3)) == ErrorCode::kConfig);
  CHECK(config_error(small(1, 1000, 0.02)) == ErrorCode::kConfig);
  CHECK(config_error(small(1, 1000, 0)) == ErrorCode::kConfig);
  SimConfig cfg = small(1, 1000, 1e-3);
  cfg.prune_tolerance = 1;
  CHECK(config_error(cfg) == ErrorCode::kConfig);
  cfg = small(1, 1000, 1e-3);
  cfg.horizon_multiplier = 0;
  CHECK(config_error(cfg) == ErrorCode::kConfig);
  CHECK_NOTHROW(validate(small(1, 100, 0.01)));
}

TEST_CASE("identical inputs give bit-identical estimates for any thread count") {
  const ModelParams p = make_params(1, 1.5, 0.4);
  for (bool is : {false, true}) {
    SimConfig cfg = small(0.8, 3001, 4e-3);
    cfg.seed = 99;
    cfg.importance_sampling = is;
    const McEstimate one = simulate(p, cfg);
    cfg.threads = 3;
    const McEstimate three = simulate(p, cfg);
    cfg.threads = 8;
    const McEstimate eight = simulate(p, cfg);
    CHECK(same_bits(one, three));
    CHECK(same_bits(one, eight));
    cfg.seed = 100;
    CHECK(!same_bits(one, simulate(p, cfg)));
  }
}

TEST_CASE("crude estimate bookkeeping") {
  const McEstimate e = simulate(make_params(1, 2, 0.3), small(0.5, 4000, 5e-3));
  CHECK(e.p_hat == static_cast<double>(e.n_joint_hits) / 4000);
  CHECK(e.n_joint_hits <= std::min(e.marginal_hits[0], e.marginal_hits[1]));
  CHECK(e.marginal_hits[1] <= e.marginal_hits[0] + 200);
  CHECK(e.log_slope == doctest::Approx(-std::log(e.p_hat) / 0.5));
  CHECK(e.ci_halfwidth_95 > 0);
  CHECK(!e.importance_sampling);
}

TEST_CASE("unreachable level gives zero and an undefined slope") {
  const McEstimate e = simulate(make_params(1, 1, 0), small(1e6, 100, 1e-3));
  CHECK(e.p_hat == 0);
  CHECK(std::isnan(e.log_slope));
  CHECK(e.ci_halfwidth_95 == 0);
}

TEST_CASE("marginal ruin frequencies match exp(-2 mu u)") {
  const ModelParams p = make_params(1, 2, 0.3);
  const double u = 0.5;
  SimConfig cfg = small(u, 20000, 5e-3);
  cfg.antithetic = false;
  const McEstimate e = simulate(p, cfg);
  const double mu[2] = {1, 2};
  for (int i = 0; i < 2; ++i) {
    const double q = std::exp(-2 * mu[i] * u);
    const double se = std::sqrt(q * (1 - q) / 20000);
    CHECK(std::abs(e.marginal_p_hat[i] - q) <= 3 * se);
    // Band: 1% critical value of the KS statistic plus the pruning allowance.
    CHECK(e.ks_distance[i] <= 1.63 / std::sqrt(20000.0) + 1e-3);
  }
}

TEST_CASE("grid-only monitoring: KS distance shrinks as dt does") {
  const ModelParams p = make_params(1, 1.2, 0.0);
  double prev = 1;
  for (double dt : {1e-2, 2.5e-3}) {
    SimConfig cfg = small(1, 5000, dt);
    cfg.bridge_correction = false;
    const double d = simulate(p, cfg).ks_distance[0];
    CHECK(d < prev);
    prev = d;
  }
  SimConfig cfg = small(1, 5000, 1e-2);
  CHECK(simulate(p, cfg).ks_distance[0] < prev);
}

TEST_CASE("p_hat is non-increasing in u under common random numbers") {
  const ModelParams p = make_params(1, 1.5, 0.5);
  double prev = 1;
  for (double u : {0.4, 0.6, 0.8, 1.0}) {
    SimConfig cfg = small(u, 5000, 4e-3);
    cfg.seed = 5;
    const McEstimate e = simulate(p, cfg);
    CHECK(e.p_hat <= prev);
    prev = e.p_hat;
  }
}

TEST_CASE("p_hat increases with correlation") {
  double prev = 0;
  for (double rho : {-0.5, 0.0, 0.5, 0.9}) {
    SimConfig cfg = small(0.5, 5000, 5e-3);
    cfg.seed = 11;
    const McEstimate e = simulate(make_params(1, 1, rho), cfg);
    CHECK(e.p_hat > prev);
    prev = e.p_hat;
  }
}

TEST_CASE("importance sampling agrees with crude sampling") {
  const ModelParams p = make_params(1, 2, 0.5);
  SimConfig cfg = small(1, 20000, 5e-3);
  const McEstimate crude = simulate(p, cfg);
  cfg.importance_sampling = true;
  cfg.seed = 1;
  const McEstimate is = simulate(p, cfg);
  CHECK(is.importance_sampling);
  CHECK(std::isnan(is.ks_distance[0]));
  CHECK(std::abs(crude.p_hat - is.p_hat) <=
        std::hypot(crude.ci_halfwidth_95, is.ci_halfwidth_95));
  CHECK(is.ci_halfwidth_95 / is.p_hat < crude.ci_halfwidth_95 / crude.p_hat);
}

TEST_CASE("tilt plan") {
  const TiltPlan a = tilt_plan(make_params(1, 2, -0.5));
  // Reversal drifts move X1 by +2 mu1 and X2 by +2 mu2.
  const double rho = -0.5, rho_bar = std::sqrt(1 - rho * rho);
  const auto x2 = [&](const std::array<double, 2>& th) {
    return rho * th[0] + rho_bar * th[1];
  };
  CHECK(a.reverse_first[0] == doctest::Approx(2));
  CHECK(x2(a.reverse_second) == doctest::Approx(4));

  const TiltPlan b = tilt_plan(make_params(1, 1, 0));
  CHECK(b.early[0] == doctest::Approx(2));
  CHECK(b.early[1] == doctest::Approx(2));
  // With rho above rho_hat_2 the joint path is the line-2 reversal.
  const TiltPlan c = tilt_plan(make_params(1, 2, 0.9));
  CHECK(c.early[0] == doctest::Approx(c.reverse_second[0]));
  CHECK(c.early[1] == doctest::Approx(c.reverse_second[1]));
}

TEST_CASE("slope_ladder plumbing") {
  const ModelParams p = make_params(1, 1, 0);
  const std::vector<double> none;
  CHECK_THROWS_AS(slope_ladder(p, none, small(1, 100, 1e-3)), Error);
  const std::vector<double> down{1.0, 0.5};
  CHECK_THROWS_AS(slope_ladder(p, down, small(1, 100, 1e-3)), Error);

  SimConfig base = small(1, 2000, 5e-3);
  base.seed = 40;
  const std::vector<double> us{0.5, 0.75};
  const std::vector<LadderPoint> l = slope_ladder(p, us, base);
  REQUIRE(l.size() == 2);
  for (std::size_t k = 0; k < 2; ++k) {
    SimConfig cfg = base;
    cfg.u = us[k];
    cfg.seed = 40 + k;
    CHECK(l[k].u == us[k]);
    CHECK(same_bits(l[k].estimate, simulate(p, cfg)));
  }
  const SlopeFit f = fit_log_slope(l);
  CHECK(f.points_used == 2);
  CHECK(f.slope == doctest::Approx((std::log(l[0].estimate.p_hat) -
                                    std::log(l[1].estimate.p_hat)) / 0.25));
}

TEST_CASE("fit_log_slope needs two cells with hits") {
  std::vector<LadderPoint> l(2);
  l[0].u = 1;
  l[0].estimate.p_hat = 0.1;
  l[1].u = 2;
  l[1].estimate.p_hat = 0;
  const SlopeFit f = fit_log_slope(l);
  CHECK(std::isnan(f.slope));
  CHECK(f.points_used == 1);
}

TEST_CASE("ladder for independent lines has slope 4") {
  SimConfig base = small(1, 20000, 4e-3);
  base.importance_sampling = true;
  const std::vector<double> us{1.0, 1.5, 2.0};
  const SlopeFit f = fit_log_slope(slope_ladder(make_params(1, 1, 0), us, base));
  CHECK(f.points_used == 3);
  CHECK(f.slope >= 3.4);
  CHECK(f.slope <= 4.6);
  CHECK(std::abs(f.slope - 4) <= 0.02);
}

TEST_CASE("ladder for negative correlation approaches slope 8") {
  const ModelParams p = make_params(1, 2, -0.5);
  SimConfig base = small(1, 20000, 4e-3);
  base.importance_sampling = true;
  const std::vector<double> near{1.0, 1.5, 2.0};
  const SlopeFit a = fit_log_slope(slope_ladder(p, near, base));
  CHECK(a.slope >= 5.5);
  // The sub-exponential factor tilts short ladders slightly above 8.
  CHECK(a.slope <= 8.25);
  const std::vector<double> far{2.0, 4.0, 6.0, 8.0};
  const SlopeFit b = fit_log_slope(slope_ladder(p, far, base));
  CHECK(b.points_used == 4);
  CHECK(std::abs(b.slope - 8) <= 0.05);
}
