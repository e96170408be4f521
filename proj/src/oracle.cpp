#include "brownruin/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "brownruin/error.hpp"
#include "brownruin/objective.hpp"

namespace brownruin {

namespace {

struct Candidate {
  double value;
  double t;
  double s;
};

// Total order used for the reduction: value first, then (t, s).
bool better(const Candidate& a, const Candidate& b) {
  if (a.value != b.value) return a.value < b.value;
  if (a.t != b.t) return a.t < b.t;
  return a.s < b.s;
}

bool usable(double x) { return std::isfinite(x) && x > 0.0; }

// One pass over an n x n log-spaced grid on [log_lo, log_hi] per axis.
Candidate scan(const ModelParams& p, double lt_lo, double lt_hi, double ls_lo,
               double ls_hi, int n, unsigned threads) {
  const double dt = (lt_hi - lt_lo) / (n - 1);
  const double ds = (ls_hi - ls_lo) / (n - 1);
  std::vector<double> ts(n), ss(n);
  for (int i = 0; i < n; ++i) {
    ts[i] = std::exp(lt_lo + dt * i);
    ss[i] = std::exp(ls_lo + ds * i);
  }

  auto rows = [&](int row_begin, int row_end) {
    Candidate best{kInf, kInf, kInf};
    for (int i = row_begin; i < row_end; ++i) {
      const double t = ts[i];
      for (int j = 0; j < n; ++j) {
        const double s = ss[j];
        const Candidate c{g_qp(p, t, s), t, s};
        if (better(c, best)) best = c;
      }
    }
    return best;
  };

  if (threads <= 1) return rows(0, n);

  std::vector<Candidate> partial(threads, Candidate{kInf, kInf, kInf});
  std::vector<std::thread> pool;
  const int chunk = (n + static_cast<int>(threads) - 1) / static_cast<int>(threads);
  for (unsigned k = 0; k < threads; ++k) {
    const int b = static_cast<int>(k) * chunk;
    const int e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&, k, b, e] { partial[k] = rows(b, e); });
  }
  for (auto& th : pool) th.join();
  Candidate best{kInf, kInf, kInf};
  for (const auto& c : partial) {
    if (better(c, best)) best = c;
  }
  return best;
}

}  // namespace

void validate(const OracleConfig& cfg) {
  std::ostringstream os;
  if (!(cfg.t_max_multiplier >= 2.0) || !std::isfinite(cfg.t_max_multiplier)) {
    os << "t_max_multiplier must be at least 2, got " << cfg.t_max_multiplier;
  } else if (cfg.initial_grid < 8) {
    os << "initial_grid must be at least 8, got " << cfg.initial_grid;
  } else if (cfg.refinement_rounds < 0) {
    os << "refinement_rounds must be non-negative, got "
       << cfg.refinement_rounds;
  } else if (!(cfg.zoom_factor > 0.0 && cfg.zoom_factor < 1.0)) {
    os << "zoom_factor must lie in (0, 1), got " << cfg.zoom_factor;
  } else {
    return;
  }
  throw Error(ErrorCode::kConfig, os.str());
}

Box search_box(const ModelParams& p, const OracleConfig& cfg) {
  const CriticalValues cv = critical_values(p);
  const double c = cfg.t_max_multiplier;

  std::vector<double> anchors = {cv.t_star, 1.0 / p.mu1(), 1.0 / p.mu2()};
  for (double x : {cv.t_A, cv.s_A, cv.t_B, cv.s_B, cv.s1_star}) {
    if (usable(x)) anchors.push_back(x);
  }
  double lo = kInf, hi = 0.0;
  for (double x : anchors) {
    if (!usable(x)) continue;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  if (!usable(lo) || !usable(hi)) {
    throw Error(ErrorCode::kBoxDegenerate,
                "no finite closed-form candidate to anchor the search box");
  }
  lo /= c;
  hi *= c;
  return {lo, hi, lo, hi};
}

OracleResult grid_minimize(const ModelParams& p, const OracleConfig& cfg) {
  validate(cfg);
  const Box box = search_box(p, cfg);
  unsigned threads = cfg.threads == 0 ? std::thread::hardware_concurrency()
                                      : cfg.threads;
  threads = std::max(1u, threads);
  const int n = cfg.initial_grid;

  const double lt0 = std::log(box.t_lo), lt1 = std::log(box.t_hi);
  const double ls0 = std::log(box.s_lo), ls1 = std::log(box.s_hi);

  OracleResult out{};
  out.box_used = box;

  // Both axes share one log-lattice (same spacing, offsets differing by a
  // whole number of cells) so diagonal points t == s stay on the grid.
  double lt_lo = lt0, ls_lo = ls0;
  double cell = (lt1 - lt0) / (n - 1);
  Candidate best{kInf, kInf, kInf};
  for (int round = 0; round <= cfg.refinement_rounds; ++round) {
    const Candidate c = scan(p, lt_lo, lt_lo + cell * (n - 1), ls_lo,
                             ls_lo + cell * (n - 1), n, threads);
    out.evaluations += static_cast<long long>(n) * n;
    if (better(c, best)) best = c;
    out.round_values.push_back(best.value);

    cell *= cfg.zoom_factor;
    const double ct = std::log(best.t), cs = std::log(best.s);
    const double half = std::floor((n - 1) / 2.0);
    lt_lo = ct - half * cell;
    ls_lo = lt_lo + std::round((cs - ct) / cell) * cell;
  }

  const double cell_t = (lt1 - lt0) / (n - 1);
  const double cell_s = (ls1 - ls0) / (n - 1);
  const double bt = std::log(best.t), bs = std::log(best.s);
  if (bt - lt0 <= 2.0 * cell_t || lt1 - bt <= 2.0 * cell_t ||
      bs - ls0 <= 2.0 * cell_s || ls1 - bs <= 2.0 * cell_s) {
    std::ostringstream os;
    os << "grid incumbent (" << best.t << ", " << best.s
       << ") lies within two cells of the search box edge";
    throw Error(ErrorCode::kBoundaryHit, os.str());
  }

  out.arg_min = {best.t, best.s};
  out.min_value = best.value;
  return out;
}

std::vector<SlicePoint> profile_slice(const ModelParams& p, SliceAxis axis,
                                      double fixed, double lo, double hi,
                                      std::size_t n) {
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "slice needs n >= 2");
  if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi)) {
    throw Error(ErrorCode::kInvalidArgument,
                "slice range must satisfy 0 < lo < hi < inf");
  }
  if (axis != SliceAxis::kDiagonal && !(fixed > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "fixed coordinate must be positive");
  }
  std::vector<SlicePoint> out;
  out.reserve(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = i + 1 == n ? hi : lo + step * static_cast<double>(i);
    double v = 0.0;
    switch (axis) {
      case SliceAxis::kTFixed: v = g_qp(p, fixed, x); break;
      case SliceAxis::kSFixed: v = g_qp(p, x, fixed); break;
      case SliceAxis::kDiagonal: v = g_qp(p, x, x); break;
    }
    out.push_back({x, v});
  }
  return out;
}

}  // namespace brownruin
