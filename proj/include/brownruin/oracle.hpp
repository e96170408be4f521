#pragma once

// Brute-force minimisation of g over the open quadrant by log-spaced grid
// search with zooming refinement. Evaluates through the quadratic-program
// route (g_qp) only, so it shares no algebra with the closed forms it is
// used to check.

#include <cstddef>
#include <vector>

#include "brownruin/closedform.hpp"
#include "brownruin/model.hpp"

namespace brownruin {

struct OracleConfig {
  double t_max_multiplier = 4.0;
  int initial_grid = 400;
  int refinement_rounds = 4;
  double zoom_factor = 0.15;
  unsigned threads = 1;  // 0 selects hardware concurrency
};

/// Throws Error{kConfig} on an invalid configuration.
void validate(const OracleConfig& cfg);

struct Box {
  double t_lo, t_hi;
  double s_lo, s_hi;

  bool strictly_contains(const Point& x) const noexcept {
    return x.t > t_lo && x.t < t_hi && x.s > s_lo && x.s < s_hi;
  }
};

struct OracleResult {
  Point arg_min;
  double min_value;
  long long evaluations;
  Box box_used;                      // initial (widest) search box
  std::vector<double> round_values;  // incumbent after each round
};

/// Search box anchored on the finite closed-form candidates. Throws
/// Error{kBoxDegenerate} if no usable candidate exists.
Box search_box(const ModelParams& p, const OracleConfig& cfg);

/// Deterministic for a given configuration regardless of thread count.
/// Throws Error{kBoundaryHit} when the incumbent ends within two grid cells
/// of the search box edge.
OracleResult grid_minimize(const ModelParams& p, const OracleConfig& cfg = {});

enum class SliceAxis { kTFixed, kSFixed, kDiagonal };

struct SlicePoint {
  double coordinate;
  double value;
};

/// n evenly spaced g_qp evaluations over [lo, hi] along the slice. For
/// kTFixed the free coordinate is s, for kSFixed it is t; `fixed` is ignored
/// on the diagonal. Throws Error{kInvalidArgument}.
std::vector<SlicePoint> profile_slice(const ModelParams& p, SliceAxis axis,
                                      double fixed, double lo, double hi,
                                      std::size_t n);

}  // namespace brownruin
