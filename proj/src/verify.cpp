#include "brownruin/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "brownruin/closedform.hpp"
#include "brownruin/error.hpp"
#include "brownruin/objective.hpp"

namespace brownruin {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> d(std::log(lo), std::log(hi));
  return std::exp(d(rng));
}

ModelParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double mu1 = log_uniform(rng, 0.1, 5.0);
  const double ratio = unit(rng) < 0.1 ? 1.0 : log_uniform(rng, 1.0, 10.0);
  const double rho = -0.99 + 1.98 * unit(rng);
  return make_params(mu1, mu1 * ratio, rho);
}

std::string describe(const ModelParams& p) {
  std::ostringstream os;
  os.precision(17);
  os << "(mu1=" << p.mu1() << ", mu2=" << p.mu2() << ", rho=" << p.rho() << ")";
  return os.str();
}

}  // namespace

CheckResult check_dual_implementation(int n, std::uint64_t seed) {
  const auto start = Clock::now();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  std::string worst_at;
  for (int i = 0; i < n; ++i) {
    const ModelParams p = random_params(rng);
    const double scale = 1.0 / p.mu2();
    double t = log_uniform(rng, 1e-2 * scale, 1e2 * scale);
    double s = log_uniform(rng, 1e-2 * scale, 1e2 * scale);
    switch (i % 3) {
      case 1:  // hug the diagonal
        s = t * (1.0 + (unit(rng) - 0.5) * 1e-3);
        break;
      case 2:  // hug a D2 boundary curve when one exists
        if (p.has_d2_region()) {
          const CriticalValues cv = critical_values(p);
          s = cv.s1_star * log_uniform(rng, 1.0, 50.0);
          const double edge = unit(rng) < 0.5 ? f1(p, s) : w1(p, s);
          t = edge * (1.0 + (unit(rng) - 0.5) * 1e-4);
        }
        break;
      default:
        break;
    }
    const double a = g_qp(p, t, s);
    const double b = g_closed(p, t, s).value;
    const double e = rel_diff(a, b);
    if (!(e <= worst) ) {
      worst = e;
      std::ostringstream os;
      os.precision(17);
      os << describe(p) << " at (t=" << t << ", s=" << s << "): g_qp=" << a
         << " g_closed=" << b;
      worst_at = os.str();
    }
  }
  std::ostringstream os;
  os << n << " points, worst relative gap " << worst;
  if (worst > 1e-9) os << " " << worst_at;
  return {"g_dual_implementation", worst <= 1e-9, os.str(), seconds_since(start)};
}

double brute_force_qp_value(const CovarianceMatrix& m, const Vec2& b) {
  const double spread =
      std::max({1.0, std::sqrt(m.m11 / m.m22), std::sqrt(m.m22 / m.m11)});
  const double width = 4.0 * (std::abs(b[0]) + std::abs(b[1]) + 1.0) * spread;
  constexpr int kNodes = 401;
  double lo0 = b[0], lo1 = b[1];
  double w0 = width, w1v = width;
  double best = kInf, bx = b[0], by = b[1];
  for (int round = 0; round < 12; ++round) {
    const double h0 = w0 / (kNodes - 1), h1 = w1v / (kNodes - 1);
    for (int i = 0; i < kNodes; ++i) {
      const double x = lo0 + h0 * i;
      for (int j = 0; j < kNodes; ++j) {
        const double y = lo1 + h1 * j;
        const double v = quadratic_form(m, {x, y});
        if (v < best) {
          best = v;
          bx = x;
          by = y;
        }
      }
    }
    // Zoom onto the incumbent, staying inside the feasible set.
    w0 *= 0.1;
    w1v *= 0.1;
    lo0 = std::max(b[0], bx - 0.5 * w0);
    lo1 = std::max(b[1], by - 0.5 * w1v);
  }
  return best;
}

CheckResult check_qp_contract(int n, int n_mesh, std::uint64_t seed) {
  const auto start = Clock::now();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int not_unique = 0;
  double worst_kkt = 0.0, worst_mesh = 0.0;
  for (int i = 0; i < n; ++i) {
    const double m11 = log_uniform(rng, 0.1, 5.0);
    const double m22 = log_uniform(rng, 0.1, 5.0);
    const double corr = -0.95 + 1.9 * unit(rng);
    const CovarianceMatrix m{m11, corr * std::sqrt(m11 * m22), m22};
    Vec2 b{-3.0 + 6.0 * unit(rng), -3.0 + 6.0 * unit(rng)};
    if (b[0] <= 0.0 && b[1] <= 0.0) b[i % 2] = -b[i % 2] + 1e-3;

    if (count_validating_sets(m, b) != 1) ++not_unique;

    const QpSolution sol = solve_qp(m, b);
    // Multipliers of x >= b are the gradient 2 M^{-1} x_opt.
    const Vec2 lambda = inverse_times(m, sol.solution);
    const double scale = std::max({1.0, 2.0 * std::abs(lambda[0]),
                                   2.0 * std::abs(lambda[1])});
    double residual = 0.0;
    for (int k = 0; k < 2; ++k) {
      const bool active = (static_cast<int>(sol.active_set) >> k) & 1;
      const double l = 2.0 * lambda[k];
      residual = std::max(residual, active ? std::max(0.0, -l) : std::abs(l));
      residual = std::max(residual, std::max(0.0, b[k] - sol.solution[k]));
      residual = std::max(residual, std::abs(l * (sol.solution[k] - b[k])));
    }
    worst_kkt = std::max(worst_kkt, residual / scale);

    if (i < n_mesh) {
      const double mesh = brute_force_qp_value(m, b);
      worst_mesh = std::max(worst_mesh, rel_diff(mesh, sol.value));
    }
  }
  std::ostringstream os;
  os << n << " instances, non-unique active sets " << not_unique
     << ", worst KKT residual " << worst_kkt << ", worst mesh gap "
     << worst_mesh << " over " << std::min(n, n_mesh);
  const bool ok = not_unique == 0 && worst_kkt < 1e-10 && worst_mesh <= 1e-6;
  return {"qp_active_set_contract", ok, os.str(), seconds_since(start)};
}

CheckResult check_boundary_identity(int n_params, int n_s, std::uint64_t seed) {
  const auto start = Clock::now();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  int made = 0;
  while (made < n_params) {
    const double mu1 = log_uniform(rng, 0.2, 4.0);
    const double mu2 = mu1 * log_uniform(rng, 1.05, 10.0);
    const double lo = mu1 / mu2;
    const double rho = lo + (0.999 - lo) * (0.02 + 0.96 * unit(rng));
    const ModelParams p = make_params(mu1, mu2, rho);
    if (!p.has_d2_region()) continue;
    ++made;
    const double s1 = critical_values(p).s1_star;
    for (int k = 0; k < n_s; ++k) {
      const double s = k == 0 ? s1 : s1 * log_uniform(rng, 1.0, 100.0);
      const double a = g3(p, f1(p, s), s);
      const double b = g3(p, w1(p, s), s);
      const double c = g2(p, s);
      worst = std::max({worst, rel_diff(a, b), rel_diff(a, c), rel_diff(b, c)});
    }
  }
  std::ostringstream os;
  os << n_params << " x " << n_s << " points, worst relative gap " << worst;
  return {"d2_boundary_identity", worst <= 1e-9, os.str(),
          seconds_since(start)};
}

double distance_to_minimizers(const ModelParams& p, double t, double s) {
  const AsymptoticsResult r = dominating_points(p);
  if (r.segment) {
    const double tc = std::clamp(t, r.segment->t_lo, r.segment->t_hi);
    return std::hypot(t - tc, s - r.segment->s_fixed);
  }
  double d = kInf;
  for (const Point& m : r.minimizers) d = std::min(d, std::hypot(t - m.t, s - m.s));
  return d;
}

CheckResult check_oracle_agreement(const std::vector<ModelParams>& mesh,
                                   const OracleConfig& cfg) {
  const auto start = Clock::now();
  double worst_value = 0.0, worst_point = 0.0;
  int failures = 0;
  std::string first_failure;
  for (const ModelParams& p : mesh) {
    const AsymptoticsResult cf = dominating_points(p);
    std::string why;
    try {
      const OracleResult orc = grid_minimize(p, cfg);
      const double gap = std::abs(orc.min_value - cf.g_min) / cf.g_min;
      const double dist = distance_to_minimizers(p, orc.arg_min.t, orc.arg_min.s);
      worst_value = std::max(worst_value, gap);
      worst_point = std::max(worst_point, dist);
      if (gap > 1e-5 || dist > 1e-3) {
        std::ostringstream os;
        os << describe(p) << " [" << regime_name(cf.regime) << "] gap " << gap
           << " distance " << dist;
        why = os.str();
      }
    } catch (const Error& e) {
      why = describe(p) + ": " + e.what();
    }
    if (!why.empty()) {
      ++failures;
      if (first_failure.empty()) first_failure = why;
    }
  }
  std::ostringstream os;
  os << mesh.size() << " instances, worst value gap " << worst_value
     << ", worst minimiser distance " << worst_point;
  if (failures) os << "; " << failures << " failing, first " << first_failure;
  return {"closedform_vs_oracle", failures == 0, os.str(), seconds_since(start)};
}

CheckResult check_gamma_shape(const std::vector<std::pair<double, double>>& drifts,
                              int n_points) {
  const auto start = Clock::now();
  int violations = 0;
  std::string first;
  auto fail = [&](const std::string& what) {
    if (violations++ == 0) first = what;
  };
  const double lo = -0.999, hi = 0.999;
  const double step = (hi - lo) / (n_points - 1);
  for (const auto& [mu1, mu2] : drifts) {
    std::vector<double> rho(n_points), gamma(n_points);
    for (int k = 0; k < n_points; ++k) {
      rho[k] = k + 1 == n_points ? hi : lo + step * k;
      const ModelParams p = make_params(mu1, mu2, rho[k]);
      gamma[k] = adjustment_coefficient(p);
      const double via_points = dominating_points(p).gamma;
      if (rel_diff(gamma[k], via_points) > 1e-12) {
        fail("gamma paths disagree at " + describe(p));
      }
    }
    const double rho2 = critical_values(make_params(mu1, mu2, 0.0)).rho_hat_2;
    for (int k = 0; k + 1 < n_points; ++k) {
      const double jump = std::abs(gamma[k + 1] - gamma[k]);
      double local = 0.0;
      if (k > 0) local = std::max(local, std::abs(gamma[k] - gamma[k - 1]));
      if (k + 2 < n_points) {
        local = std::max(local, std::abs(gamma[k + 2] - gamma[k + 1]));
      }
      if (jump > 10.0 * local + 1e-12 * gamma[k]) {
        fail("jump near " + describe(make_params(mu1, mu2, rho[k])));
      }
      if (rho[k + 1] <= rho2 && !(gamma[k + 1] < gamma[k])) {
        fail("not strictly decreasing near " +
             describe(make_params(mu1, mu2, rho[k])));
      }
    }
    for (int k = 0; k < n_points; ++k) {
      if (rho[k] >= rho2 && rel_diff(gamma[k], 2.0 * mu2) > 1e-12) {
        fail("not 2 mu2 beyond rho_hat_2 at " +
             describe(make_params(mu1, mu2, rho[k])));
      }
    }
  }
  std::ostringstream os;
  os << drifts.size() << " drift pairs x " << n_points << " correlations, "
     << violations << " violations";
  if (violations) os << "; first: " << first;
  return {"gamma_shape", violations == 0, os.str(), seconds_since(start)};
}

CheckResult check_spot_values() {
  const auto start = Clock::now();
  const double a = adjustment_coefficient(make_params(1.0, 2.0, 0.9));
  const double b = adjustment_coefficient(make_params(1.0, 1.0, 0.0));
  const double c = adjustment_coefficient(make_params(1.0, 2.0, 0.5));
  const double c_expected = (3.0 + 2.0 * std::sqrt(3.0)) / 1.5;
  std::ostringstream os;
  os.precision(17);
  os << "gamma(1,2,0.9)=" << a << " gamma(1,1,0)=" << b
     << " gamma(1,2,0.5)=" << c;
  const bool ok = a == 4.0 && std::abs(b - 4.0) <= 1e-12 &&
                  std::abs(c - c_expected) <= 1e-12;
  return {"gamma_spot_values", ok, os.str(), seconds_since(start)};
}

std::vector<ModelParams> acceptance_mesh() {
  std::vector<ModelParams> mesh;
  for (double mu1 : {0.5, 1.0, 2.0}) {
    for (double ratio : {1.0, 1.5, 3.0, 10.0}) {
      const double mu2 = mu1 * ratio;
      const CriticalValues cv = critical_values(make_params(mu1, mu2, 0.0));
      std::vector<double> rhos = {cv.rho_hat_1};
      if (cv.rho_hat_1 > 0.0) rhos.push_back(0.5 * cv.rho_hat_1);
      rhos.push_back(0.5 * (cv.rho_hat_1 + std::min(1.0, cv.rho_hat_2)));
      if (cv.rho_hat_2 < 1.0) {
        rhos.push_back(cv.rho_hat_2);
        rhos.push_back(0.5 * (cv.rho_hat_2 + 1.0));
      }
      const std::size_t fixed = rhos.size();
      const std::size_t fill = 25 - fixed;
      for (std::size_t k = 0; k < fill; ++k) {
        double r = -0.95 + 1.9 * static_cast<double>(k) / (fill - 1);
        // Keep the sweep off the thresholds; those are listed explicitly.
        for (std::size_t f = 0; f < fixed; ++f) {
          if (std::abs(r - rhos[f]) < 1e-3) r += 2e-3;
        }
        rhos.push_back(r);
      }
      for (double r : rhos) mesh.push_back(make_params(mu1, mu2, r));
    }
  }
  return mesh;
}

std::vector<std::pair<double, double>> shape_drift_pairs() {
  std::vector<std::pair<double, double>> pairs;
  for (double mu1 : {0.3, 1.0, 2.5, 5.0}) {
    for (double ratio : {1.0, 1.2, 2.0, 4.0, 12.0}) {
      pairs.emplace_back(mu1, mu1 * ratio);
    }
  }
  return pairs;
}

std::vector<CheckResult> run_verification(VerifyLevel level,
                                          const CheckCallback& on_result) {
  const bool full = level == VerifyLevel::kFull;
  std::vector<CheckResult> results;
  auto record = [&](CheckResult r) {
    if (on_result) on_result(r);
    results.push_back(std::move(r));
  };

  record(check_dual_implementation(full ? 100000 : 20000, 20240601));
  record(check_qp_contract(full ? 10000 : 2000, full ? 100 : 10, 7));
  record(check_boundary_identity(20, 50, 11));
  record(check_spot_values());
  record(check_gamma_shape(shape_drift_pairs(), full ? 10000 : 2000));

  std::vector<ModelParams> mesh = acceptance_mesh();
  if (!full) {
    std::vector<ModelParams> subset;
    for (std::size_t i = 0; i < mesh.size(); i += 5) subset.push_back(mesh[i]);
    mesh = std::move(subset);
  }
  record(check_oracle_agreement(mesh, OracleConfig{}));
  return results;
}

}  // namespace brownruin
