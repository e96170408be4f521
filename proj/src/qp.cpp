#include "brownruin/qp.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <sstream>

#include "brownruin/error.hpp"

namespace brownruin {

namespace {

// Slack allowed on the free-coordinate inequality so that points on a
// switching boundary do not flap between representations.
constexpr double kComplementSlack = 1e-12;

constexpr std::array<ActiveSet, 3> kCandidateOrder = {
    ActiveSet::kBoth, ActiveSet::kFirst, ActiveSet::kSecond};

void check_inputs(const CovarianceMatrix& m, const Vec2& b) {
  if (!m.positive_definite() || !std::isfinite(m.det())) {
    std::ostringstream os;
    os << "matrix [[" << m.m11 << ", " << m.m12 << "], [" << m.m12 << ", "
       << m.m22 << "]] is not positive definite";
    throw Error(ErrorCode::kNotPositiveDefinite, os.str());
  }
  if (!std::isfinite(b[0]) || !std::isfinite(b[1])) {
    throw Error(ErrorCode::kInvalidArgument, "constraint vector must be finite");
  }
  if (b[0] <= 0.0 && b[1] <= 0.0) {
    std::ostringstream os;
    os << "constraint vector (" << b[0] << ", " << b[1]
       << ") has no positive component; the minimum would be 0 at x = 0";
    throw Error(ErrorCode::kInfeasibleB, os.str());
  }
}

bool complement_ok(double free_value, double bound) {
  return free_value - bound >= -kComplementSlack * std::max(1.0, std::abs(bound));
}

// Candidate evaluation without validation: solution and value implied by
// treating `set` as binding.
QpSolution candidate(const CovarianceMatrix& m, const Vec2& b, ActiveSet set) {
  switch (set) {
    case ActiveSet::kBoth:
      return {b, set, quadratic_form(m, b)};
    case ActiveSet::kFirst:
      return {{b[0], m.m12 / m.m11 * b[0]}, set, b[0] * b[0] / m.m11};
    case ActiveSet::kSecond:
      return {{m.m12 / m.m22 * b[1], b[1]}, set, b[1] * b[1] / m.m22};
  }
  return {b, set, 0.0};
}

}  // namespace

const char* active_set_name(ActiveSet set) noexcept {
  switch (set) {
    case ActiveSet::kFirst: return "{1}";
    case ActiveSet::kSecond: return "{2}";
    case ActiveSet::kBoth: return "{1,2}";
  }
  return "?";
}

Vec2 inverse_times(const CovarianceMatrix& m, const Vec2& x) {
  const double det = m.det();
  return {(m.m22 * x[0] - m.m12 * x[1]) / det,
          (m.m11 * x[1] - m.m12 * x[0]) / det};
}

double quadratic_form(const CovarianceMatrix& m, const Vec2& x) {
  return (m.m22 * x[0] * x[0] - 2.0 * m.m12 * x[0] * x[1] +
          m.m11 * x[1] * x[1]) /
         m.det();
}

bool validates(const CovarianceMatrix& m, const Vec2& b, ActiveSet set) {
  switch (set) {
    case ActiveSet::kBoth: {
      const Vec2 y = inverse_times(m, b);
      return y[0] > 0.0 && y[1] > 0.0;
    }
    case ActiveSet::kFirst:
      return b[0] / m.m11 > 0.0 && complement_ok(m.m12 / m.m11 * b[0], b[1]);
    case ActiveSet::kSecond:
      return b[1] / m.m22 > 0.0 && complement_ok(m.m12 / m.m22 * b[1], b[0]);
  }
  return false;
}

int count_validating_sets(const CovarianceMatrix& m, const Vec2& b) {
  check_inputs(m, b);
  int n = 0;
  for (ActiveSet set : kCandidateOrder) n += validates(m, b, set) ? 1 : 0;
  return n;
}

QpSolution solve_qp(const CovarianceMatrix& m, const Vec2& b) {
  check_inputs(m, b);
  for (ActiveSet set : kCandidateOrder) {
    if (!validates(m, b, set)) continue;
    QpSolution sol = candidate(m, b, set);
#ifndef NDEBUG
    // Any other qualifying set must describe the same minimum.
    for (ActiveSet other : kCandidateOrder) {
      if (other == set || !validates(m, b, other)) continue;
      const double v = candidate(m, b, other).value;
      assert(std::abs(v - sol.value) <= 1e-9 * sol.value);
    }
#endif
    return sol;
  }
  // Unreachable for valid inputs: exactly one set qualifies by construction
  // of the problem. Fall back to the smallest feasible candidate.
  QpSolution best = candidate(m, b, ActiveSet::kBoth);
  for (ActiveSet set : {ActiveSet::kFirst, ActiveSet::kSecond}) {
    const QpSolution c = candidate(m, b, set);
    const bool feasible = c.solution[0] >= b[0] && c.solution[1] >= b[1];
    if (feasible && c.value < best.value) best = c;
  }
  return best;
}

double min_value_only(const CovarianceMatrix& m, const Vec2& b) {
  return solve_qp(m, b).value;
}

}  // namespace brownruin
