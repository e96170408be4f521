#pragma once

// Property suites that cross-check the closed forms against the
// quadratic-program route and the grid oracle. Shared by `brownruin verify`
// and the acceptance tests.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "brownruin/model.hpp"
#include "brownruin/oracle.hpp"
#include "brownruin/qp.hpp"

namespace brownruin {

struct CheckResult {
  std::string name;
  bool passed;
  std::string detail;
  double seconds;
};

/// |g_qp - g_closed| <= 1e-9 g_qp on n random (params, t, s).
CheckResult check_dual_implementation(int n, std::uint64_t seed);

/// n random positive definite instances: exactly one active set validates
/// and the KKT residual is below 1e-10; the first n_mesh values match a
/// dense-mesh minimisation within 1e-6 relative.
CheckResult check_qp_contract(int n, int n_mesh, std::uint64_t seed);

/// g3(f1(s), s), g3(w1(s), s), g2(s) pairwise within 1e-9 relative for
/// n_params random instances with rho > mu1/mu2 and n_s values of s >= s1*.
CheckResult check_boundary_identity(int n_params, int n_s, std::uint64_t seed);

/// Grid oracle against the closed-form minimum on every instance: value
/// within 1e-5 relative, minimiser within 1e-3 absolute.
CheckResult check_oracle_agreement(const std::vector<ModelParams>& mesh,
                                   const OracleConfig& cfg);

/// gamma(rho) on n_points of (-0.999, 0.999) for each drift pair: no jump
/// beyond 10x the neighbouring secant slope, strictly decreasing up to
/// rho_hat_2, equal to 2 mu2 from there on. Also checks the two gamma paths
/// agree within 1e-12 relative.
CheckResult check_gamma_shape(const std::vector<std::pair<double, double>>& drifts,
                              int n_points);

/// Fixed values of the adjustment coefficient.
CheckResult check_spot_values();

/// 12 drift pairs x 25 correlations, covering every regime and the exact
/// critical correlations.
std::vector<ModelParams> acceptance_mesh();

/// 20 drift pairs including equal drifts.
std::vector<std::pair<double, double>> shape_drift_pairs();

/// Minimum of x^T M^{-1} x over x >= b by coarse-to-fine mesh search. Used
/// as an independent reference for solve_qp.
double brute_force_qp_value(const CovarianceMatrix& m, const Vec2& b);

/// Smallest |(t, s) - m| over the closed-form minimising set.
double distance_to_minimizers(const ModelParams& p, double t, double s);

enum class VerifyLevel { kQuick, kFull };

using CheckCallback = std::function<void(const CheckResult&)>;

/// Runs every suite at the chosen size, reporting each as it finishes.
std::vector<CheckResult> run_verification(VerifyLevel level,
                                          const CheckCallback& on_result = {});

}  // namespace brownruin
