#pragma once

// Problem instances of the two-line Brownian risk model, their regime
// thresholds, and the curves that partition the (t, s) quadrant.

#include <limits>

namespace brownruin {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative width of the "on the threshold" band used when classifying a
// correlation against a critical value.
inline constexpr double kThresholdTolerance = 1e-13;

/// Drifts mu1 <= mu2 (unit volatility) and correlation rho in (-1, 1).
/// Only constructible through make_params, so every instance is valid.
class ModelParams {
 public:
  double mu1() const noexcept { return mu1_; }
  double mu2() const noexcept { return mu2_; }
  double rho() const noexcept { return rho_; }

  bool equal_drifts() const noexcept { return mu1_ == mu2_; }

  /// rho > mu1/mu2, read as "never" when the drifts coincide.
  bool has_d2_region() const noexcept {
    return !equal_drifts() && rho_ * mu2_ > mu1_;
  }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  friend ModelParams make_params(double mu1, double mu2, double rho);
  ModelParams(double mu1, double mu2, double rho)
      : mu1_(mu1), mu2_(mu2), rho_(rho) {}

  double mu1_;
  double mu2_;
  double rho_;
};

/// Throws Error{kNonPositiveDrift | kCorrelationOutOfRange | kDomain}.
/// Inputs with mu1 > mu2 are rejected, not swapped.
ModelParams make_params(double mu1, double mu2, double rho);

/// Thresholds and candidate optimizer coordinates. Quantities that are
/// undefined for the current rho hold kInf.
struct CriticalValues {
  double rho_hat_1;      // lower critical correlation, in [0, 1/2)
  double rho_hat_2;      // upper critical correlation, (mu1+mu2)/(2 mu2)
  double rho_hat;        // root of mu2 + rho mu1 - 2 mu2 rho^2 in (0, 1]
  double t_star;         // diagonal minimizer of g_L
  double s_star;         // == t_star
  double s1_star;        // f1/w1 intersection, kInf unless rho > mu1/mu2
  double s_double_star;  // kInf when its denominator is <= 0
  double t_double_star;  // kInf when rho >= rho_hat
  double t_A;
  double s_A;            // kInf when mu2 == 2 rho mu1
  double t_B;            // kInf when mu1 == 2 rho mu2
  double s_B;
};

CriticalValues critical_values(const ModelParams& p);

double t_star(const ModelParams& p);

enum class Half { kA, kL, kB };        // s < t, s == t, s > t
enum class SubRegion { kD1, kD2 };

struct Region {
  Half half;
  SubRegion sub;

  friend bool operator==(const Region&, const Region&) = default;
};

/// Throws Error{kNonPositiveTime} unless t, s > 0. Points on the D2
/// boundary curves belong to D2.
Region classify_point(const ModelParams& p, double t, double s);

/// Closed-form boundary curves. The D2 curves f1, w1 need rho > mu1/mu2 to
/// bound anything but are evaluated wherever their denominators allow;
/// kInf marks an undefined value.
struct BoundaryCurves {
  double f1;          // f1(x)
  double f2;          // f2(x)
  double w1;          // w1(x)
  double w2;          // w2(x), kInf for rho == 0
  double h1;          // h1(x)
  double h2;          // h2(x)
  double w1_inverse;  // inverse of w1 at x, kInf unless x >= s1*
};

BoundaryCurves boundary_curves(const ModelParams& p, double x);

double f1(const ModelParams& p, double s);
double w1(const ModelParams& p, double s);
double w1_inverse(const ModelParams& p, double t);

}  // namespace brownruin
