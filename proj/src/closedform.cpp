#include "brownruin/closedform.hpp"

#include <algorithm>
#include <cmath>

namespace brownruin {

const char* regime_name(Regime r) noexcept {
  switch (r) {
    case Regime::kNegRho: return "NEG_RHO";
    case Regime::kSubRho1: return "SUB_RHO1";
    case Regime::kAtRho1: return "AT_RHO1";
    case Regime::kMid: return "MID";
    case Regime::kAtRho2: return "AT_RHO2";
    case Regime::kSuperRho2: return "SUPER_RHO2";
  }
  return "?";
}

const char* regime_case(Regime r) noexcept {
  switch (r) {
    case Regime::kNegRho: return "i";
    case Regime::kSubRho1: return "ii";
    case Regime::kAtRho1: return "iii";
    case Regime::kMid: return "iv";
    case Regime::kAtRho2: return "v";
    case Regime::kSuperRho2: return "vi";
  }
  return "?";
}

bool on_threshold(double rho, double threshold) noexcept {
  return std::abs(rho - threshold) <=
         kThresholdTolerance * std::max(1.0, std::abs(threshold));
}

Regime classify_regime(const ModelParams& p) {
  const CriticalValues cv = critical_values(p);
  const double rho = p.rho();
  if (on_threshold(rho, cv.rho_hat_1)) return Regime::kAtRho1;
  if (on_threshold(rho, cv.rho_hat_2)) return Regime::kAtRho2;
  if (rho < 0.0) return Regime::kNegRho;
  if (rho < cv.rho_hat_1) return Regime::kSubRho1;
  if (rho < cv.rho_hat_2) return Regime::kMid;
  return Regime::kSuperRho2;
}

namespace {

double value_below_rho1(const ModelParams& p) {
  return 4.0 * (p.mu2() + (1.0 - 2.0 * p.rho()) * p.mu1());
}

double value_mid(const ModelParams& p, double ts) {
  return 2.0 / (1.0 + p.rho()) * (p.mu1() + p.mu2() + 2.0 / ts);
}

}  // namespace

AsymptoticsResult dominating_points(const ModelParams& p) {
  const double mu1 = p.mu1(), mu2 = p.mu2(), rho = p.rho();
  AsymptoticsResult r{};
  r.regime = classify_regime(p);
  r.boundary = r.regime == Regime::kAtRho1 || r.regime == Regime::kAtRho2;

  switch (r.regime) {
    case Regime::kNegRho:
    case Regime::kSubRho1: {
      const double tA = (1.0 - 2.0 * rho) / mu1;
      const double sA = 1.0 / (mu2 - 2.0 * rho * mu1);
      r.minimizers.push_back({tA, sA});
      if (p.equal_drifts()) {
        r.minimizers.push_back({sA, tA});
        r.g_min = 8.0 * (1.0 - rho) * mu1;
      } else {
        r.g_min = value_below_rho1(p);
      }
      break;
    }
    case Regime::kAtRho1: {
      const double ts = t_star(p);
      r.minimizers.push_back({ts, ts});
      r.g_min = value_below_rho1(p);
      break;
    }
    case Regime::kMid: {
      const double ts = t_star(p);
      r.minimizers.push_back({ts, ts});
      r.g_min = value_mid(p, ts);
      break;
    }
    case Regime::kAtRho2: {
      r.minimizers.push_back({1.0 / mu2, 1.0 / mu2});
      r.g_min = 4.0 * mu2;
      break;
    }
    case Regime::kSuperRho2: {
      // g equals g2(s) on D2 and g2 is minimal at s = 1/mu2; the D2 slice
      // there runs from w1(1/mu2) = t_B to f1(1/mu2) = (2 rho - 1)/mu1.
      const double s0 = 1.0 / mu2;
      Segment seg{s0, w1(p, s0), f1(p, s0)};
      r.segment = seg;
      r.minimizers.push_back({std::clamp(s0, seg.t_lo, seg.t_hi), s0});
      r.g_min = 4.0 * mu2;
      break;
    }
  }
  r.gamma = r.g_min / 2.0;
  return r;
}

double adjustment_coefficient(const ModelParams& p) {
  const CriticalValues cv = critical_values(p);
  const double rho = p.rho();
  if (rho <= cv.rho_hat_1 || on_threshold(rho, cv.rho_hat_1)) {
    return 2.0 * (p.mu2() + (1.0 - 2.0 * rho) * p.mu1());
  }
  if (rho >= cv.rho_hat_2 || on_threshold(rho, cv.rho_hat_2)) {
    return 2.0 * p.mu2();
  }
  return (p.mu1() + p.mu2() + 2.0 / cv.t_star) / (1.0 + rho);
}

}  // namespace brownruin
