#pragma once

// The outer objective g(t, s) = min over x >= (1 + mu1 t, 1 + mu2 s) of
// x^T Sigma_ts^{-1} x, where Sigma_ts is the covariance of (X1(t), X2(s)).
//
// Two independent evaluation routes are provided: g_qp solves the inner
// quadratic program directly, g_closed picks the matching closed-form
// piece by region. They must agree everywhere.

#include "brownruin/model.hpp"
#include "brownruin/qp.hpp"

namespace brownruin {

enum class Representation { kG3A, kG3B, kGL, kG2OnD2 };

const char* representation_name(Representation r) noexcept;

struct ObjectiveValue {
  double value;
  Representation representation;
  Region region;
};

/// Covariance of (X1(t), X2(s)).
CovarianceMatrix sigma_ts(const ModelParams& p, double t, double s);

/// Lower bounds (1 + mu1 t, 1 + mu2 s).
Vec2 level_vector(const ModelParams& p, double t, double s);

/// Throws Error{kNonPositiveTime}.
double g_qp(const ModelParams& p, double t, double s);

/// Throws Error{kNonPositiveTime}.
ObjectiveValue g_closed(const ModelParams& p, double t, double s);

double g1(const ModelParams& p, double t);
double g2(const ModelParams& p, double s);
double g_L(const ModelParams& p, double s);
double g_A(const ModelParams& p, double t, double s);
double g_B(const ModelParams& p, double t, double s);

/// Full quadratic form with both constraints binding, valid on the whole
/// quadrant.
double g3(const ModelParams& p, double t, double s);

/// g_A(t2(s), s): the profile of g_A along its interior stationary curve.
double f_A(const ModelParams& p, double s);
/// g_B(t, s2(t)).
double f_B(const ModelParams& p, double t);

/// Both roots of the inner stationarity condition in one coordinate. Roots
/// may be negative; callers keep the ones that are admissible.
struct StationaryRoots {
  double first;
  double second;
};

/// Roots t1(s), t2(s) of d g_A / d t = 0.
StationaryRoots stationary_t(const ModelParams& p, double s);
/// Roots s1(t), s2(t) of d g_B / d s = 0.
StationaryRoots stationary_s(const ModelParams& p, double t);

}  // namespace brownruin
