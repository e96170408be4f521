#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "brownruin/closedform.hpp"
#include "brownruin/objective.hpp"
#include "brownruin/verify.hpp"

using namespace brownruin;

TEST_CASE("classify_regime examples") {
  CHECK(classify_regime(make_params(1, 2, -0.3)) == Regime::kNegRho);
  CHECK(classify_regime(make_params(1, 2, 0.1)) == Regime::kSubRho1);
  CHECK(classify_regime(make_params(1, 2, 0.5)) == Regime::kMid);
  CHECK(classify_regime(make_params(1, 2, 0.75)) == Regime::kAtRho2);
  CHECK(classify_regime(make_params(1, 2, 0.9)) == Regime::kSuperRho2);
  CHECK(classify_regime(make_params(1, 1, 0.0)) == Regime::kAtRho1);
  const double r1 = critical_values(make_params(1, 2, 0)).rho_hat_1;
  CHECK(classify_regime(make_params(1, 2, r1)) == Regime::kAtRho1);
  CHECK(classify_regime(make_params(1, 2, r1 + 1e-15)) == Regime::kAtRho1);
  CHECK(classify_regime(make_params(1, 2, r1 + 1e-9)) == Regime::kMid);
  CHECK(std::string(regime_case(Regime::kSuperRho2)) == "vi");
  CHECK(std::string(regime_name(Regime::kMid)) == "MID");
}

TEST_CASE("dominating_points examples") {
  const AsymptoticsResult a = dominating_points(make_params(1, 2, -0.5));
  REQUIRE(a.minimizers.size() == 1);
  CHECK(a.minimizers[0].t == doctest::Approx(2).epsilon(1e-14));
  CHECK(a.minimizers[0].s == doctest::Approx(1.0 / 3).epsilon(1e-14));
  CHECK(a.g_min == doctest::Approx(16).epsilon(1e-14));
  CHECK(a.gamma == doctest::Approx(8).epsilon(1e-14));

  const AsymptoticsResult b = dominating_points(make_params(1, 1, -0.5));
  REQUIRE(b.minimizers.size() == 2);
  CHECK(b.minimizers[0].t == doctest::Approx(2).epsilon(1e-14));
  CHECK(b.minimizers[0].s == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(b.minimizers[1].t == b.minimizers[0].s);
  CHECK(b.minimizers[1].s == b.minimizers[0].t);
  CHECK(b.g_min == doctest::Approx(12).epsilon(1e-14));

  const AsymptoticsResult c = dominating_points(make_params(1, 2, 0.75));
  CHECK(c.regime == Regime::kAtRho2);
  CHECK(c.boundary);
  CHECK(c.minimizers[0].t == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(c.minimizers[0].s == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(c.g_min == doctest::Approx(8).epsilon(1e-14));
  CHECK(c.gamma == doctest::Approx(4).epsilon(1e-14));

  const AsymptoticsResult d = dominating_points(make_params(1, 2, 0.9));
  REQUIRE(d.segment);
  CHECK(d.segment->s_fixed == 0.5);
  CHECK(d.segment->t_lo == doctest::Approx(1 / (2 * 0.9 * 2 - 1)).epsilon(1e-14));
  CHECK(d.segment->t_hi == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(d.g_min == 8);
  for (int i = 0; i <= 20; ++i) {
    const double t = d.segment->t_lo + (d.segment->t_hi - d.segment->t_lo) * i / 20;
    CHECK(g_qp(make_params(1, 2, 0.9), t, 0.5) == doctest::Approx(8).epsilon(1e-12));
  }
}

TEST_CASE("adjustment coefficient spot values") {
  CHECK(adjustment_coefficient(make_params(1, 1, 0)) == 4);
  CHECK(adjustment_coefficient(make_params(1, 2, 0.9)) == 4);
  CHECK(std::abs(adjustment_coefficient(make_params(1, 2, 0.5)) -
                 (3 + 2 * std::sqrt(3.0)) / 1.5) <= 1e-12);
}

TEST_CASE("both gamma paths agree in every regime") {
  std::set<Regime> seen;
  for (const ModelParams& p : acceptance_mesh()) {
    const AsymptoticsResult r = dominating_points(p);
    seen.insert(r.regime);
    CHECK(std::abs(adjustment_coefficient(p) - r.gamma) <= 1e-12 * r.gamma);
    CHECK(r.gamma == r.g_min / 2);
  }
  CHECK(seen.size() == 6);
}

TEST_CASE("reported minimizers beat random probes") {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> unit(0, 1);
  const ModelParams cases[] = {make_params(1, 2, -0.5), make_params(1, 1, -0.5),
                               make_params(1, 2, 0.1),  make_params(1, 2, 0.5),
                               make_params(1, 2, 0.75), make_params(1, 2, 0.9),
                               make_params(0.5, 5, 0.3), make_params(1, 1, 0)};
  for (const ModelParams& p : cases) {
    const AsymptoticsResult r = dominating_points(p);
    for (const Point& x : r.minimizers) {
      CHECK(g_closed(p, x.t, x.s).value == doctest::Approx(r.g_min).epsilon(1e-12));
    }
    for (int k = 0; k < 10000; ++k) {
      const double t = std::exp(-4 + 6 * unit(rng));
      const double s = std::exp(-4 + 6 * unit(rng));
      CHECK(g_closed(p, t, s).value >= r.g_min - 1e-12);
    }
  }
}

TEST_CASE("gamma is continuous and decreasing up to rho_hat_2") {
  const CheckResult r = check_gamma_shape(shape_drift_pairs(), 10000);
  INFO(r.detail);
  CHECK(r.passed);
}

TEST_CASE("equal drifts decrease over the whole range") {
  // rho_hat_2 is 1 here, so no sample lies on the flat part.
  const CheckResult ok = check_gamma_shape({{1.0, 1.0}}, 2000);
  CHECK(ok.passed);
}
