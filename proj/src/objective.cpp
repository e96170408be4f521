#include "brownruin/objective.hpp"

#include <algorithm>
#include <cassert>

namespace brownruin {

namespace {

#ifdef BROWNRUIN_MUTATE_GA_SIGN
// Deliberately wrong build used to prove the self-check catches a bad g_A.
constexpr double kGaCrossSign = -1.0;
#else
constexpr double kGaCrossSign = 1.0;
#endif

}  // namespace

const char* representation_name(Representation r) noexcept {
  switch (r) {
    case Representation::kG3A: return "G3_A";
    case Representation::kG3B: return "G3_B";
    case Representation::kGL: return "G_L";
    case Representation::kG2OnD2: return "G2_ON_D2";
  }
  return "?";
}

CovarianceMatrix sigma_ts(const ModelParams& p, double t, double s) {
  return {t, p.rho() * std::min(t, s), s};
}

Vec2 level_vector(const ModelParams& p, double t, double s) {
  return {1.0 + p.mu1() * t, 1.0 + p.mu2() * s};
}

double g_qp(const ModelParams& p, double t, double s) {
  classify_point(p, t, s);  // argument check only
  return min_value_only(sigma_ts(p, t, s), level_vector(p, t, s));
}

double g1(const ModelParams& p, double t) {
  const double a = 1.0 + p.mu1() * t;
  return a * a / t;
}

double g2(const ModelParams& p, double s) {
  const double b = 1.0 + p.mu2() * s;
  return b * b / s;
}

double g_L(const ModelParams& p, double s) {
  const double a = 1.0 + p.mu1() * s;
  const double b = 1.0 + p.mu2() * s;
  const double rho = p.rho();
  return (a * a + b * b - 2.0 * rho * a * b) / ((1.0 - rho * rho) * s);
}

double g_A(const ModelParams& p, double t, double s) {
  const double rho = p.rho();
  const double a = 1.0 + p.mu1() * t;
  const double b = 1.0 + p.mu2() * s;
  const double r = a - kGaCrossSign * rho * b;
  return b * b / s + r * r / (t - rho * rho * s);
}

double g_B(const ModelParams& p, double t, double s) {
  const double rho = p.rho();
  const double a = 1.0 + p.mu1() * t;
  const double b = 1.0 + p.mu2() * s;
  const double r = b - rho * a;
  return a * a / t + r * r / (s - rho * rho * t);
}

double g3(const ModelParams& p, double t, double s) {
  return quadratic_form(sigma_ts(p, t, s), level_vector(p, t, s));
}

ObjectiveValue g_closed(const ModelParams& p, double t, double s) {
  const Region region = classify_point(p, t, s);
  if (region.sub == SubRegion::kD2) {
    return {g2(p, s), Representation::kG2OnD2, region};
  }
  switch (region.half) {
    case Half::kL:
      return {g_L(p, s), Representation::kGL, region};
    case Half::kA:
      assert(t - p.rho() * p.rho() * s > 0.0);
      return {g_A(p, t, s), Representation::kG3A, region};
    case Half::kB:
      assert(s - p.rho() * p.rho() * t > 0.0);
      return {g_B(p, t, s), Representation::kG3B, region};
  }
  return {g_L(p, s), Representation::kGL, region};
}

double f_A(const ModelParams& p, double s) {
  const double mu1 = p.mu1(), mu2 = p.mu2(), rho = p.rho();
  return g2(p, s) + 4.0 * mu1 * ((1.0 - rho) + (rho * rho * mu1 - rho * mu2) * s);
}

double f_B(const ModelParams& p, double t) {
  const double mu1 = p.mu1(), mu2 = p.mu2(), rho = p.rho();
  return g1(p, t) + 4.0 * mu2 * ((1.0 - rho) + (rho * rho * mu2 - rho * mu1) * t);
}

StationaryRoots stationary_t(const ModelParams& p, double s) {
  const double mu1 = p.mu1(), mu2 = p.mu2(), rho = p.rho();
  return {(rho - 1.0 + rho * mu2 * s) / mu1,
          (1.0 - rho + (2.0 * mu1 * rho * rho - rho * mu2) * s) / mu1};
}

StationaryRoots stationary_s(const ModelParams& p, double t) {
  const double mu1 = p.mu1(), mu2 = p.mu2(), rho = p.rho();
  return {(rho - 1.0 + rho * mu1 * t) / mu2,
          (1.0 - rho + (2.0 * mu2 * rho * rho - rho * mu1) * t) / mu2};
}

}  // namespace brownruin
