#pragma once

// Minimise x^T M^{-1} x subject to x >= b for a 2x2 positive definite M.
//
// The minimiser is characterised by a unique non-empty active set I of
// binding constraints: x_I = b_I with M_II^{-1} b_I > 0, and the free
// coordinates follow x_{I^c} = M_{I^c I} M_II^{-1} b_I >= b_{I^c}. The solver
// tries the candidate sets {1,2}, {1}, {2} in that order and returns the
// first one meeting every condition.

#include <array>
#include <cstdint>

namespace brownruin {

/// Symmetric 2x2 matrix [[m11, m12], [m12, m22]].
struct CovarianceMatrix {
  double m11;
  double m12;
  double m22;

  double det() const noexcept { return m11 * m22 - m12 * m12; }
  bool positive_definite() const noexcept { return m11 > 0.0 && det() > 0.0; }
};

using Vec2 = std::array<double, 2>;

/// Bitmask over constraint indices: bit 0 is constraint 1, bit 1 is
/// constraint 2.
enum class ActiveSet : std::uint8_t { kFirst = 1, kSecond = 2, kBoth = 3 };

const char* active_set_name(ActiveSet set) noexcept;

struct QpSolution {
  Vec2 solution;
  ActiveSet active_set;
  double value;
};

/// Throws Error{kNotPositiveDefinite} or Error{kInfeasibleB} (b <= 0).
QpSolution solve_qp(const CovarianceMatrix& m, const Vec2& b);

/// Same contract as solve_qp, value only.
double min_value_only(const CovarianceMatrix& m, const Vec2& b);

/// Checks the optimality conditions for one candidate set. Returns false
/// when the set does not qualify.
bool validates(const CovarianceMatrix& m, const Vec2& b, ActiveSet set);

/// Number of candidate sets passing validates(); 1 away from the
/// measure-zero switching boundaries.
int count_validating_sets(const CovarianceMatrix& m, const Vec2& b);

/// x^T M^{-1} x via the adjugate.
double quadratic_form(const CovarianceMatrix& m, const Vec2& x);

/// M^{-1} x via the adjugate.
Vec2 inverse_times(const CovarianceMatrix& m, const Vec2& x);

}  // namespace brownruin
