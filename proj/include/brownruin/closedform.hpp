#pragma once

// Dominating points and the adjustment coefficient in closed form.
//
// The correlation axis splits into six regimes by the critical values
// rho_hat_1 < rho_hat_2:
//
//   kNegRho     -1 < rho < 0
//   kSubRho1     0 <= rho < rho_hat_1      (empty when mu1 == mu2)
//   kAtRho1      rho == rho_hat_1
//   kMid         rho_hat_1 < rho < rho_hat_2
//   kAtRho2      rho == rho_hat_2
//   kSuperRho2   rho_hat_2 < rho < 1       (empty when mu1 == mu2)
//
// "==" means within kThresholdTolerance relative to the threshold.

#include <optional>
#include <string>
#include <vector>

#include "brownruin/model.hpp"

namespace brownruin {

enum class Regime { kNegRho, kSubRho1, kAtRho1, kMid, kAtRho2, kSuperRho2 };

const char* regime_name(Regime r) noexcept;
/// Roman-numeral case label, "i" through "vi".
const char* regime_case(Regime r) noexcept;

struct Point {
  double t;
  double s;
};

/// The flat minimizing set of the kSuperRho2 regime: the slice s = s_fixed of
/// D2, t in [t_lo, t_hi]. Both ends lie on D2 boundary curves (w1 and f1).
struct Segment {
  double s_fixed;
  double t_lo;
  double t_hi;
};

struct AsymptoticsResult {
  Regime regime;
  bool boundary;                    // rho sits on rho_hat_1 or rho_hat_2
  std::vector<Point> minimizers;    // one point, or two (case i, mu1 == mu2)
  std::optional<Segment> segment;   // kSuperRho2 only; minimizers[0] lies on it
  double g_min;
  double gamma;                     // g_min / 2
};

Regime classify_regime(const ModelParams& p);

bool on_threshold(double rho, double threshold) noexcept;

AsymptoticsResult dominating_points(const ModelParams& p);

/// Three-branch formula for gamma, computed without going through
/// dominating_points.
double adjustment_coefficient(const ModelParams& p);

}  // namespace brownruin
