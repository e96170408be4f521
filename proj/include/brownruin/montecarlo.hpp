#pragma once

// Path simulation of the correlated two-line model to estimate
//
//   P(u) = P( sup_t X1(t) - mu1 t > u  and  sup_s X2(s) - mu2 s > u )
//
// on a finite horizon with exact Gaussian increments. Every path draws from
// its own counter-based substream keyed by (seed, path index), and the
// per-path outcomes are reduced in path order, so results are bit-identical
// for any thread count.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "brownruin/model.hpp"

namespace brownruin {

struct SimConfig {
  double u = 1.0;
  std::int64_t n_paths = 100000;
  double dt = 1e-3;
  double horizon_multiplier = 10.0;  // horizon T = multiplier * u / mu1
  std::uint64_t seed = 0;
  bool antithetic = true;
  unsigned threads = 1;  // 0 selects hardware concurrency
  // A line whose running value drops more than ln(1/tol)/(2 mu_i) below u
  // can still reach u with probability at most tol; it is retired there.
  // Under importance sampling the bound is relative instead: a line is
  // retired once it drops ln(1/tol)/(2 mu_i) below its starting point.
  // 0 tracks every line to the horizon.
  double prune_tolerance = 1e-10;
  // Between grid points each line is a Brownian bridge; sample its maximum
  // instead of reading the maximum off the grid. Off: grid monitoring only,
  // which misses crossings and biases p_hat down by O(sqrt(dt)).
  bool bridge_correction = true;
  // Shift the path mean towards the dominating point and reweight by the
  // likelihood ratio.
  bool importance_sampling = false;
};

/// Throws Error{kConfig}.
void validate(const SimConfig& cfg);

struct McEstimate {
  double u;
  std::int64_t n_paths;
  double p_hat;
  double ci_halfwidth_95;      // normal approximation
  double log_slope;            // -ln(p_hat)/u, NaN when p_hat == 0
  std::int64_t n_joint_hits;
  std::array<std::int64_t, 2> marginal_hits;
  // NaN under importance sampling: the tilt aims at joint ruin, so the
  // reweighted marginal frequencies are unusable.
  std::array<double, 2> marginal_p_hat;
  // Kolmogorov-Smirnov distance on [0, u] between the simulated running
  // supremum of line i and Exp(2 mu_i). NaN under importance sampling.
  std::array<double, 2> ks_distance;
  // Correlation of the two suprema, each censored at the level where its
  // line stopped being tracked. Informational only.
  double sup_correlation;
  bool importance_sampling;
};

McEstimate simulate(const ModelParams& p, const SimConfig& cfg);

struct LadderPoint {
  double u;
  McEstimate estimate;
};

/// One simulate() per level; level k uses seed cfg_base.seed + k. Throws
/// Error{kConfig} unless u_values is non-empty and strictly ascending.
std::vector<LadderPoint> slope_ladder(const ModelParams& p,
                                      std::span<const double> u_values,
                                      const SimConfig& cfg_base);

struct SlopeFit {
  double slope;      // least-squares slope of -ln(p_hat) against u
  double intercept;
  int points_used;   // ladder cells with p_hat > 0
};

/// slope is NaN when fewer than two cells have hits.
SlopeFit fit_log_slope(std::span<const LadderPoint> ladder);

/// Importance-sampling drift of the driving motions (B1, B2), in units where
/// u = 1. Until the first line hits, paths follow the most likely joint ruin
/// path (`early`); after that the remaining line has its drift reversed.
struct TiltPlan {
  std::array<double, 2> early;
  std::array<double, 2> reverse_first;   // line 2 already hit
  std::array<double, 2> reverse_second;  // line 1 already hit
};

TiltPlan tilt_plan(const ModelParams& p);

}  // namespace brownruin
