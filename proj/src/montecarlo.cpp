#include "brownruin/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include <boost/random/normal_distribution.hpp>

#include "brownruin/closedform.hpp"
#include "brownruin/error.hpp"
#include "brownruin/objective.hpp"
#include "brownruin/qp.hpp"
#include "brownruin/rng.hpp"

namespace brownruin {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kZ95 = 1.959963984540054;
constexpr std::uint64_t kBridgeStream = std::uint64_t{1} << 63;
constexpr std::uint64_t kLineTwoStream = std::uint64_t{1} << 62;
// exp(-40) ~ 4e-18: the bridge cannot reach the running maximum.
constexpr double kBridgeCutoff = 40.0;

struct PathOutcome {
  bool hit[2];
  double sup[2];
  double log_weight;  // 0 for crude sampling
};

struct PathSimulator {
  const ModelParams& p;
  const SimConfig& cfg;
  std::int64_t steps;
  double sqrt_dt;
  double rho_bar;
  std::array<double, 2> prune_gap;  // kInf when pruning is off
  TiltPlan tilt;

  PathOutcome run(std::int64_t path) const {
    const std::uint64_t stream =
        cfg.antithetic ? static_cast<std::uint64_t>(path) / 2
                       : static_cast<std::uint64_t>(path);
    const double sign = (cfg.antithetic && (path & 1)) ? -1.0 : 1.0;
    PhiloxEngine engine(cfg.seed, stream);
    boost::random::normal_distribution<double> normal;

    const double u = cfg.u, dt = cfg.dt;
    const double drift[2] = {p.mu1() * dt, p.mu2() * dt};

    PathOutcome out{{false, false}, {0.0, 0.0}, 0.0};
    double y[2] = {0.0, 0.0};
    bool done[2] = {false, false};
    // Bridge uniforms come from per-path, per-line streams so antithetic
    // partners keep their normals aligned and one line's retirement does not
    // shift the other line's draws.
    const std::uint64_t bridge_stream =
        static_cast<std::uint64_t>(path) | kBridgeStream;
    PhiloxEngine bridge_engine[2] = {
        PhiloxEngine(cfg.seed, bridge_stream),
        PhiloxEngine(cfg.seed, bridge_stream | kLineTwoStream)};
    auto uniform = [&](int i) {
      const std::uint64_t hi = bridge_engine[i](), lo = bridge_engine[i]();
      return (static_cast<double>((hi << 32 | lo) >> 11) + 1.0) * 0x1.0p-53;
    };
    // Moves line i from y[i] to y_next, updating its running maximum.
    auto advance = [&](int i, double y_next) {
      const double a = y[i];
      y[i] = y_next;
      double& m = out.sup[i];
      m = std::max(m, y_next);
      if (cfg.bridge_correction) {
        // P(bridge max > m) = exp(-2 (m - a)(m - y_next) / dt).
        const double e = 2.0 * (m - a) * (m - y_next) / dt;
        if (e < kBridgeCutoff) {
          const double d = y_next - a;
          const double top =
              0.5 * (a + y_next + std::sqrt(d * d - 2.0 * dt * std::log(uniform(i))));
          m = std::max(m, top);
        }
      }
    };
    auto retire = [&](int i) {
      if (done[i]) return;
      if (out.sup[i] > u) {
        out.hit[i] = true;
        done[i] = true;
      } else if (u - y[i] > prune_gap[i]) {
        done[i] = true;
      }
    };
    retire(0);
    retire(1);

    for (std::int64_t k = 0; k < steps && !(done[0] && done[1]); ++k) {
      double db1 = sign * sqrt_dt * normal(engine);
      double db2 = sign * sqrt_dt * normal(engine);
      if (cfg.importance_sampling) {
        std::array<double, 2> th{0.0, 0.0};
        if (!out.hit[0] && !out.hit[1]) {
          th = tilt.early;
        } else if (!out.hit[0]) {
          th = tilt.reverse_first;
        } else if (!out.hit[1]) {
          th = tilt.reverse_second;
        }
        // dP/dQ for one Gaussian step whose mean was shifted by th*dt.
        out.log_weight -= th[0] * db1 + th[1] * db2 +
                          0.5 * (th[0] * th[0] + th[1] * th[1]) * dt;
        db1 += th[0] * dt;
        db2 += th[1] * dt;
      }
      const double dx[2] = {db1, p.rho() * db1 + rho_bar * db2};
      for (int i = 0; i < 2; ++i) {
        if (done[i]) continue;
        advance(i, y[i] + dx[i] - drift[i]);
        retire(i);
      }
    }
    return out;
  }
};

unsigned resolve_threads(unsigned requested) {
  const unsigned n =
      requested == 0 ? std::thread::hardware_concurrency() : requested;
  return std::max(1u, n);
}

// KS distance on [0, u] between the empirical law of `sups` and Exp(rate).
double ks_distance(std::vector<double> sups, double rate, double u) {
  std::sort(sups.begin(), sups.end());
  const double n = static_cast<double>(sups.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < sups.size() && sups[i] <= u) {
    std::size_t j = i;
    while (j < sups.size() && sups[j] == sups[i]) ++j;
    const double x = sups[i];
    const double f = -std::expm1(-rate * x);
    d = std::max(d, std::abs(static_cast<double>(i) / n - f));
    d = std::max(d, std::abs(static_cast<double>(j) / n - f));
    i = j;
  }
  // Left limit at u.
  const double fu = -std::expm1(-rate * u);
  d = std::max(d, std::abs(static_cast<double>(i) / n - fu));
  return d;
}

double correlation(const std::vector<PathOutcome>& out) {
  const double n = static_cast<double>(out.size());
  double m0 = 0.0, m1 = 0.0;
  for (const auto& o : out) {
    m0 += o.sup[0];
    m1 += o.sup[1];
  }
  m0 /= n;
  m1 /= n;
  double c = 0.0, v0 = 0.0, v1 = 0.0;
  for (const auto& o : out) {
    const double a = o.sup[0] - m0, b = o.sup[1] - m1;
    c += a * b;
    v0 += a * a;
    v1 += b * b;
  }
  return (v0 > 0.0 && v1 > 0.0) ? c / std::sqrt(v0 * v1) : kNaN;
}

}  // namespace

void validate(const SimConfig& cfg) {
  std::ostringstream os;
  if (!(cfg.u > 0.0) || !std::isfinite(cfg.u)) {
    os << "u must be positive and finite, got " << cfg.u;
  } else if (cfg.n_paths < 100) {
    os << "n_paths must be at least 100, got " << cfg.n_paths;
  } else if (!(cfg.dt > 0.0) || cfg.dt > cfg.u / 100.0) {
    os << "dt must lie in (0, u/100] = (0, " << cfg.u / 100.0 << "], got "
       << cfg.dt;
  } else if (!(cfg.horizon_multiplier > 0.0) ||
             !std::isfinite(cfg.horizon_multiplier)) {
    os << "horizon_multiplier must be positive, got " << cfg.horizon_multiplier;
  } else if (!(cfg.prune_tolerance >= 0.0 && cfg.prune_tolerance < 1.0)) {
    os << "prune_tolerance must lie in [0, 1), got " << cfg.prune_tolerance;
  } else {
    return;
  }
  throw Error(ErrorCode::kConfig, os.str());
}

TiltPlan tilt_plan(const ModelParams& p) {
  const AsymptoticsResult dom = dominating_points(p);
  const Point x0 = dom.minimizers.front();
  const QpSolution qp =
      solve_qp(sigma_ts(p, x0.t, x0.s), level_vector(p, x0.t, x0.s));
  // Mean path of (X1, X2) conditioned on passing through the QP optimum at
  // the dominating times: drift C y before min(t0, s0), with
  // y = Sigma^{-1} x_opt and C the instantaneous correlation matrix.
  const Vec2 y = inverse_times(sigma_ts(p, x0.t, x0.s), qp.solution);
  const double rho = p.rho();
  const double rho_bar = std::sqrt(1.0 - rho * rho);

  TiltPlan plan{};
  plan.early = {y[0] + rho * y[1], rho_bar * y[1]};
  // Reversal adds 2 mu_i to the drift of line i with the smallest tilt.
  const double m1 = p.mu1(), m2 = p.mu2();
  plan.reverse_first = {2.0 * m1, 0.0};
  plan.reverse_second = {2.0 * m2 * rho, 2.0 * m2 * rho_bar};
  return plan;
}

McEstimate simulate(const ModelParams& p, const SimConfig& cfg) {
  validate(cfg);
  const double horizon = cfg.horizon_multiplier * cfg.u / p.mu1();

  PathSimulator sim{p, cfg, 0, std::sqrt(cfg.dt),
                    std::sqrt(1.0 - p.rho() * p.rho()), {kInf, kInf}, {}};
  sim.steps = static_cast<std::int64_t>(std::ceil(horizon / cfg.dt));
  if (cfg.prune_tolerance > 0.0) {
    const double l = -std::log(cfg.prune_tolerance);
    sim.prune_gap = {l / (2.0 * p.mu1()), l / (2.0 * p.mu2())};
    if (cfg.importance_sampling) {
      // p_hat is far below tol here, so the bound is taken relative to the
      // chance of reaching u from the start: retire below -l/(2 mu_i).
      for (double& g : sim.prune_gap) g += cfg.u;
    }
  }
  if (cfg.importance_sampling) sim.tilt = tilt_plan(p);

  std::vector<PathOutcome> outcomes(static_cast<std::size_t>(cfg.n_paths));
  const unsigned threads = std::min<unsigned>(
      resolve_threads(cfg.threads), static_cast<unsigned>(cfg.n_paths));
  auto work = [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      outcomes[static_cast<std::size_t>(i)] = sim.run(i);
    }
  };
  if (threads <= 1) {
    work(0, cfg.n_paths);
  } else {
    std::vector<std::thread> pool;
    const std::int64_t chunk = (cfg.n_paths + threads - 1) / threads;
    for (unsigned k = 0; k < threads; ++k) {
      const std::int64_t b = k * chunk;
      const std::int64_t e = std::min(cfg.n_paths, b + chunk);
      if (b >= e) break;
      pool.emplace_back(work, b, e);
    }
    for (auto& t : pool) t.join();
  }

  // Serial reduction in path order.
  McEstimate est{};
  est.u = cfg.u;
  est.n_paths = cfg.n_paths;
  est.importance_sampling = cfg.importance_sampling;
  const double n = static_cast<double>(cfg.n_paths);
  double sum_w = 0.0, sum_w2 = 0.0;
  for (const auto& o : outcomes) {
    const double w = cfg.importance_sampling ? std::exp(o.log_weight) : 1.0;
    for (int i = 0; i < 2; ++i) {
      if (o.hit[i]) ++est.marginal_hits[i];
    }
    if (o.hit[0] && o.hit[1]) {
      ++est.n_joint_hits;
      sum_w += w;
      sum_w2 += w * w;
    }
  }
  est.p_hat = sum_w / n;
  const double var = std::max(0.0, sum_w2 / n - est.p_hat * est.p_hat);
  est.ci_halfwidth_95 = kZ95 * std::sqrt(var / n);
  est.log_slope = est.p_hat > 0.0 ? -std::log(est.p_hat) / cfg.u : kNaN;
  est.marginal_p_hat = {static_cast<double>(est.marginal_hits[0]) / n,
                        static_cast<double>(est.marginal_hits[1]) / n};

  if (cfg.importance_sampling) {
    est.marginal_p_hat = {kNaN, kNaN};
    est.ks_distance = {kNaN, kNaN};
    est.sup_correlation = kNaN;
  } else {
    const double mu[2] = {p.mu1(), p.mu2()};
    for (int i = 0; i < 2; ++i) {
      std::vector<double> sups;
      sups.reserve(outcomes.size());
      for (const auto& o : outcomes) sups.push_back(o.sup[i]);
      est.ks_distance[i] = ks_distance(std::move(sups), 2.0 * mu[i], cfg.u);
    }
    est.sup_correlation = correlation(outcomes);
  }
  return est;
}

std::vector<LadderPoint> slope_ladder(const ModelParams& p,
                                      std::span<const double> u_values,
                                      const SimConfig& cfg_base) {
  if (u_values.empty()) {
    throw Error(ErrorCode::kConfig, "ladder needs at least one level u");
  }
  for (std::size_t i = 1; i < u_values.size(); ++i) {
    if (!(u_values[i] > u_values[i - 1])) {
      throw Error(ErrorCode::kConfig, "ladder levels must be strictly ascending");
    }
  }
  std::vector<LadderPoint> out;
  out.reserve(u_values.size());
  for (std::size_t i = 0; i < u_values.size(); ++i) {
    SimConfig cfg = cfg_base;
    cfg.u = u_values[i];
    cfg.seed = cfg_base.seed + i;
    out.push_back({u_values[i], simulate(p, cfg)});
  }
  return out;
}

SlopeFit fit_log_slope(std::span<const LadderPoint> ladder) {
  double su = 0, sy = 0, suu = 0, suy = 0;
  int k = 0;
  for (const auto& pt : ladder) {
    if (!(pt.estimate.p_hat > 0.0)) continue;
    const double y = -std::log(pt.estimate.p_hat);
    su += pt.u;
    sy += y;
    suu += pt.u * pt.u;
    suy += pt.u * y;
    ++k;
  }
  if (k < 2) return {kNaN, kNaN, k};
  const double den = k * suu - su * su;
  const double slope = (k * suy - su * sy) / den;
  return {slope, (sy - slope * su) / k, k};
}

}  // namespace brownruin
