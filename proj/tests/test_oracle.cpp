#include <doctest.h>

#include <cmath>

#include "brownruin/closedform.hpp"
#include "brownruin/error.hpp"
#include "brownruin/oracle.hpp"

using namespace brownruin;

namespace {

ErrorCode config_error(const OracleConfig& cfg) {
  try {
    validate(cfg);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kInvalidArgument;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("grid_minimize examples") {
  const OracleResult a = grid_minimize(make_params(1, 1, 0));
  CHECK(rel(a.min_value, 8) <= 1e-6);
  CHECK(std::abs(a.arg_min.t - 1) <= 1e-3);
  CHECK(std::abs(a.arg_min.s - 1) <= 1e-3);

  const ModelParams p = make_params(1, 2, -0.5);
  const OracleResult b = grid_minimize(p);
  CHECK(rel(b.min_value, 16) <= 1e-5);
  CHECK(std::abs(b.arg_min.t - 2) <= 1e-2);
  CHECK(std::abs(b.arg_min.s - 1.0 / 3) <= 1e-2);

  const ModelParams q = make_params(1, 2, 0.5);
  const OracleResult c = grid_minimize(q);
  CHECK(rel(c.min_value, dominating_points(q).g_min) <= 1e-5);
  CHECK(c.evaluations > 0);
}

TEST_CASE("incumbent never worsens across rounds") {
  for (const ModelParams& p : {make_params(1, 2, 0.9), make_params(0.7, 3, 0.2),
                               make_params(1, 1, -0.5)}) {
    const OracleResult r = grid_minimize(p);
    REQUIRE(r.round_values.size() == 5);
    for (std::size_t i = 1; i < r.round_values.size(); ++i) {
      CHECK(r.round_values[i] <= r.round_values[i - 1]);
    }
    CHECK(r.round_values.back() == r.min_value);
    for (const Point& x : dominating_points(p).minimizers) {
      CHECK(r.box_used.strictly_contains(x));
    }
  }
}

TEST_CASE("thread count does not change the result") {
  const ModelParams p = make_params(0.8, 2.5, 0.35);
  OracleConfig cfg;
  const OracleResult one = grid_minimize(p, cfg);
  cfg.threads = 4;
  const OracleResult four = grid_minimize(p, cfg);
  CHECK(one.min_value == four.min_value);
  CHECK(one.arg_min.t == four.arg_min.t);
  CHECK(one.arg_min.s == four.arg_min.s);
  CHECK(one.evaluations == four.evaluations);
}

TEST_CASE("oracle configuration errors") {
  OracleConfig cfg;
  cfg.initial_grid = 2;
  CHECK(config_error(cfg) == ErrorCode::kConfig);
  cfg = {};
  cfg.zoom_factor = 1.5;
  CHECK(config_error(cfg) == ErrorCode::kConfig);
  cfg = {};
  cfg.refinement_rounds = -1;
  CHECK(config_error(cfg) == ErrorCode::kConfig);
  cfg = {};
  cfg.t_max_multiplier = 1.5;
  CHECK(config_error(cfg) == ErrorCode::kConfig);
  CHECK_NOTHROW(validate(OracleConfig{}));
}

TEST_CASE("a box too tight for the minimiser reports BoundaryHit") {
  OracleConfig cfg;
  cfg.initial_grid = 8;
  cfg.t_max_multiplier = 2;
  try {
    grid_minimize(make_params(1, 2, -0.5), cfg);
    FAIL("expected BoundaryHit");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kBoundaryHit);
  }
}

TEST_CASE("profile_slice") {
  const std::vector<SlicePoint> d =
      profile_slice(make_params(1, 1, 0), SliceAxis::kDiagonal, 0, 0.5, 1.5, 3);
  REQUIRE(d.size() == 3);
  CHECK(d[1].coordinate == 1);
  CHECK(d[1].value == doctest::Approx(8).epsilon(1e-15));
  CHECK(d[0].value > 8);
  CHECK(d[2].value > 8);

  const ModelParams p = make_params(1, 2, 0.5);
  const double ts = critical_values(p).t_star;
  const std::vector<SlicePoint> line =
      profile_slice(p, SliceAxis::kDiagonal, 0, 0.2, 1.2, 1001);
  std::size_t best = 0;
  for (std::size_t i = 1; i < line.size(); ++i) {
    if (line[i].value < line[best].value) best = i;
  }
  CHECK(std::abs(line[best].coordinate - ts) <= 1e-3);

  const ModelParams q = make_params(1, 2, 0.9);
  const Segment seg = *dominating_points(q).segment;
  for (const SlicePoint& x :
       profile_slice(q, SliceAxis::kSFixed, 0.5, seg.t_lo, seg.t_hi, 50)) {
    CHECK(x.value == doctest::Approx(8).epsilon(1e-12));
  }

  CHECK_THROWS_AS(profile_slice(p, SliceAxis::kTFixed, 1, 1, 2, 0), Error);
  CHECK_THROWS_AS(profile_slice(p, SliceAxis::kTFixed, 1, 2, 1, 5), Error);
  CHECK_THROWS_AS(profile_slice(p, SliceAxis::kTFixed, -1, 1, 2, 5), Error);
}
