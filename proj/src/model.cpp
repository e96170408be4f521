#include "brownruin/model.hpp"

#include <cmath>
#include <sstream>

#include "brownruin/error.hpp"

namespace brownruin {

ModelParams make_params(double mu1, double mu2, double rho) {
  if (!(mu1 > 0.0) || !(mu2 > 0.0) || !std::isfinite(mu1) ||
      !std::isfinite(mu2)) {
    std::ostringstream os;
    os << "drifts must be positive and finite (mu1=" << mu1 << ", mu2=" << mu2
       << ")";
    throw Error(ErrorCode::kNonPositiveDrift, os.str());
  }
  if (!(rho > -1.0 && rho < 1.0)) {
    std::ostringstream os;
    os << "correlation must lie in (-1, 1), got " << rho;
    throw Error(ErrorCode::kCorrelationOutOfRange, os.str());
  }
  if (mu1 > mu2) {
    std::ostringstream os;
    os << "mu1 must not exceed mu2 (got mu1=" << mu1 << ", mu2=" << mu2
       << "); sort the business lines before calling";
    throw Error(ErrorCode::kDomain, os.str());
  }
  return ModelParams(mu1, mu2, rho);
}

namespace {

double positive_reciprocal(double num, double den) {
  return den > 0.0 ? num / den : kInf;
}

}  // namespace

double t_star(const ModelParams& p) {
  const double mu1 = p.mu1(), mu2 = p.mu2(), rho = p.rho();
  return std::sqrt(2.0 * (1.0 - rho) /
                   (mu1 * mu1 + mu2 * mu2 - 2.0 * rho * mu1 * mu2));
}

CriticalValues critical_values(const ModelParams& p) {
  const double mu1 = p.mu1(), mu2 = p.mu2(), rho = p.rho();
  CriticalValues cv{};

  const double sum = mu1 + mu2;
  cv.rho_hat_1 =
      (sum - std::sqrt(sum * sum - 4.0 * mu1 * (mu2 - mu1))) / (4.0 * mu1);
  cv.rho_hat_2 = sum / (2.0 * mu2);
  cv.rho_hat = (mu1 + std::sqrt(mu1 * mu1 + 8.0 * mu2 * mu2)) / (4.0 * mu2);

  cv.t_star = t_star(p);
  cv.s_star = cv.t_star;

  cv.s1_star = p.has_d2_region() ? (1.0 - rho) / (rho * mu2 - mu1) : kInf;
  cv.s_double_star =
      positive_reciprocal(1.0 - rho, mu1 + rho * mu2 - 2.0 * mu1 * rho * rho);
  cv.t_double_star =
      positive_reciprocal(1.0 - rho, mu2 + rho * mu1 - 2.0 * mu2 * rho * rho);

  cv.t_A = (1.0 - 2.0 * rho) / mu1;
  const double dA = std::abs(mu2 - 2.0 * rho * mu1);
  cv.s_A = dA > 0.0 ? 1.0 / dA : kInf;
  const double dB = std::abs(mu1 - 2.0 * rho * mu2);
  cv.t_B = dB > 0.0 ? 1.0 / dB : kInf;
  cv.s_B = (1.0 - 2.0 * rho) / mu2;
  return cv;
}

double f1(const ModelParams& p, double s) {
  return (p.rho() - 1.0) / p.mu1() + p.rho() * p.mu2() / p.mu1() * s;
}

double w1(const ModelParams& p, double s) {
  const double den = p.rho() + (p.rho() * p.mu2() - p.mu1()) * s;
  return den > 0.0 ? s / den : kInf;
}

double w1_inverse(const ModelParams& p, double t) {
  if (!p.has_d2_region()) return kInf;
  const double k = p.rho() * p.mu2() - p.mu1();
  const double s1 = (1.0 - p.rho()) / k;
  const double den = 1.0 - k * t;
  if (t < s1 || !(den > 0.0)) return kInf;
  return p.rho() * t / den;
}

BoundaryCurves boundary_curves(const ModelParams& p, double x) {
  const double mu1 = p.mu1(), mu2 = p.mu2(), rho = p.rho();
  BoundaryCurves c{};
  c.f1 = f1(p, x);
  const double df2 = 1.0 + (mu2 - rho * mu1) * x;
  c.f2 = df2 > 0.0 ? rho * x / df2 : kInf;
  c.w1 = w1(p, x);
  c.w2 = rho != 0.0 ? (1.0 - rho) / (mu1 * rho) + mu2 / (mu1 * rho) * x : kInf;
  const double dh1 = 1.0 + (mu1 - rho * mu2) * x;
  c.h1 = dh1 > 0.0 ? rho * x / dh1 : kInf;
  c.h2 = (rho - 1.0) / mu2 + rho * mu1 / mu2 * x;
  c.w1_inverse = w1_inverse(p, x);
  return c;
}

Region classify_point(const ModelParams& p, double t, double s) {
  if (!(t > 0.0) || !(s > 0.0) || !std::isfinite(t) || !std::isfinite(s)) {
    std::ostringstream os;
    os << "times must be positive and finite (t=" << t << ", s=" << s << ")";
    throw Error(ErrorCode::kNonPositiveTime, os.str());
  }
  Region r{};
  r.half = s < t ? Half::kA : (s == t ? Half::kL : Half::kB);
  r.sub = SubRegion::kD1;
  if (p.has_d2_region() && w1(p, s) <= t && t <= f1(p, s)) {
    r.sub = SubRegion::kD2;
  }
  return r;
}

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kDomain: return "DomainError";
    case ErrorCode::kNonPositiveDrift: return "NonPositiveDrift";
    case ErrorCode::kCorrelationOutOfRange: return "CorrelationOutOfRange";
    case ErrorCode::kNonPositiveTime: return "NonPositiveTime";
    case ErrorCode::kNotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::kInfeasibleB: return "InfeasibleB";
    case ErrorCode::kBoxDegenerate: return "BoxDegenerate";
    case ErrorCode::kBoundaryHit: return "BoundaryHit";
    case ErrorCode::kConfig: return "ConfigError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "UnknownError";
}

}  // namespace brownruin
