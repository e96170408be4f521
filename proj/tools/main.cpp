// brownruin command-line tool.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "brownruin/brownruin.h"
#include "record.hpp"

namespace {

using brcli::json;

enum Exit { kOk = 0, kFailed = 1, kUsage = 2, kIo = 3, kGap = 4 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Library failures. Everything except a failed internal check is a
// validation problem with the caller's input.
struct ApiError : std::runtime_error {
  br_status status;
  ApiError(br_status s, const std::string& what)
      : std::runtime_error(what), status(s) {}
};

void check(br_status s) {
  if (s != BR_OK) {
    throw ApiError(s, std::string(br_status_name(s)) + ": " + br_last_error());
  }
}

struct Options {
  double mu1 = NAN, mu2 = NAN, rho = NAN;
  bool sort = false, json = false, csv = false;
  std::string out, config;
  unsigned threads = 0;
  double tol = 1e-5;

  double rho_from = -0.9, rho_to = 0.9;
  int steps = 181;

  double m11 = NAN, m12 = NAN, m22 = NAN, b1 = NAN, b2 = NAN;

  br_oracle_config oracle = br_oracle_config_default();
  br_sim_config sim = br_sim_config_default();
  bool no_antithetic = false, importance_sampling = false, no_bridge = false;
  std::vector<double> u_values{1.0, 1.5, 2.0};

  bool quick = false, full = false;
};

using Setter = std::function<void(const json&)>;

// Config-file setters keyed by long flag name.
std::map<std::string, Setter> config_setters(Options& o) {
  auto real = [](double& dst) {
    return [&dst](const json& v) { dst = brcli::real_from_json(v); };
  };
  auto flag = [](bool& dst) {
    return [&dst](const json& v) {
      if (!v.is_boolean()) throw UsageError("expected true or false");
      dst = v.get<bool>();
    };
  };
  auto text = [](std::string& dst) {
    return [&dst](const json& v) {
      if (!v.is_string()) throw UsageError("expected a string");
      dst = v.get<std::string>();
    };
  };
  auto integer = [](auto& dst) {
    return [&dst](const json& v) {
      if (!v.is_number_integer()) throw UsageError("expected an integer");
      dst = v.get<std::remove_reference_t<decltype(dst)>>();
    };
  };
  return {
      {"mu1", real(o.mu1)},
      {"mu2", real(o.mu2)},
      {"rho", real(o.rho)},
      {"sort", flag(o.sort)},
      {"json", flag(o.json)},
      {"csv", flag(o.csv)},
      {"out", text(o.out)},
      {"threads", integer(o.threads)},
      {"seed", integer(o.sim.seed)},
      {"tol", real(o.tol)},
      {"rho-from", real(o.rho_from)},
      {"rho-to", real(o.rho_to)},
      {"steps", integer(o.steps)},
      {"m11", real(o.m11)},
      {"m12", real(o.m12)},
      {"m22", real(o.m22)},
      {"b1", real(o.b1)},
      {"b2", real(o.b2)},
      {"box-mult", real(o.oracle.t_max_multiplier)},
      {"grid", integer(o.oracle.initial_grid)},
      {"rounds", integer(o.oracle.refinement_rounds)},
      {"zoom", real(o.oracle.zoom_factor)},
      {"u", real(o.sim.u)},
      {"paths", integer(o.sim.n_paths)},
      {"dt", real(o.sim.dt)},
      {"horizon", real(o.sim.horizon_multiplier)},
      {"prune-tol", real(o.sim.prune_tolerance)},
      {"no-antithetic", flag(o.no_antithetic)},
      {"importance-sampling", flag(o.importance_sampling)},
      {"no-bridge", flag(o.no_bridge)},
      {"u-values",
       [&o](const json& v) {
         if (!v.is_array()) throw UsageError("expected an array");
         o.u_values.clear();
         for (const auto& x : v) o.u_values.push_back(brcli::real_from_json(x));
       }},
      {"quick", flag(o.quick)},
      {"full", flag(o.full)},
  };
}

void add_output_flags(CLI::App* cmd, Options& o) {
  cmd->add_flag("--json", o.json, "Emit the JSON record envelope");
  cmd->add_flag("--csv", o.csv, "Emit CSV");
  cmd->add_option("--out", o.out, "Write output to FILE (atomically)");
  cmd->add_option("--config", o.config,
                  "JSON file of flat flag defaults; explicit flags win");
}

void add_model_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--mu1", o.mu1, "Drift of line 1 (mu1 <= mu2)")->required();
  cmd->add_option("--mu2", o.mu2, "Drift of line 2")->required();
  cmd->add_option("--rho", o.rho, "Correlation in (-1, 1)");
  cmd->add_flag("--sort", o.sort, "Swap the drifts if mu1 > mu2");
}

void add_threads(CLI::App* cmd, Options& o) {
  cmd->add_option("--threads", o.threads, "Worker cap (0: all cores)");
}

void add_sim_flags(CLI::App* cmd, Options& o) {
  add_threads(cmd, o);
  cmd->add_option("--seed", o.sim.seed, "RNG seed")->default_val(0);
  cmd->add_option("--paths", o.sim.n_paths, "Number of paths")
      ->default_val(o.sim.n_paths);
  cmd->add_option("--dt", o.sim.dt, "Time step")->default_val(o.sim.dt);
  cmd->add_option("--horizon", o.sim.horizon_multiplier,
                  "Horizon T = horizon * u / mu1")
      ->default_val(o.sim.horizon_multiplier);
  cmd->add_option("--prune-tol", o.sim.prune_tolerance,
                  "Drop a line once its ruin chance is below this (0: never)")
      ->default_val(o.sim.prune_tolerance);
  cmd->add_flag("--no-antithetic", o.no_antithetic,
                "Disable antithetic path pairs");
  cmd->add_flag("--importance-sampling", o.importance_sampling,
                "Tilt paths toward the dominating point");
  cmd->add_flag("--no-bridge", o.no_bridge,
                "Monitor the maxima on the time grid only");
}

struct Params {
  br_params* handle = nullptr;
  Params(const Params&) = delete;
  Params& operator=(const Params&) = delete;
  explicit Params(const Options& o) {
    if (std::isnan(o.rho)) throw UsageError("--rho is required");
    double mu1 = o.mu1, mu2 = o.mu2;
    if (o.sort && mu1 > mu2) std::swap(mu1, mu2);
    check(br_params_create(mu1, mu2, o.rho, &handle));
  }
  ~Params() { br_params_destroy(handle); }
  brcli::ParamsEcho echo() const {
    brcli::ParamsEcho e;
    check(br_params_get(handle, &e.mu1, &e.mu2, &e.rho));
    return e;
  }
};

brcli::RunRecord make_record(const std::string& command) {
  brcli::RunRecord r;
  r.command = command;
  r.tool_version = br_version();
  return r;
}

brcli::RunRecord cmd_gamma(const Options& o) {
  const Params p(o);
  auto r = make_record("gamma");
  r.params = p.echo();
  br_asymptotics a{};
  check(br_dominating_points(p.handle, &a));
  r.result = a;
  return r;
}

brcli::RunRecord cmd_sweep(const Options& o) {
  if (!(o.steps >= 1)) throw UsageError("--steps must be at least 1");
  if (!(o.rho_to > o.rho_from)) {
    throw UsageError("--rho-to must exceed --rho-from");
  }
  double mu1 = o.mu1, mu2 = o.mu2;
  if (o.sort && mu1 > mu2) std::swap(mu1, mu2);
  auto r = make_record("sweep");
  brcli::SweepTable rows;
  rows.reserve(static_cast<std::size_t>(o.steps));
  const double step = o.steps > 1 ? (o.rho_to - o.rho_from) / (o.steps - 1) : 0;
  for (int i = 0; i < o.steps; ++i) {
    Options point = o;
    point.mu1 = mu1;
    point.mu2 = mu2;
    point.sort = false;
    point.rho = i + 1 == o.steps && o.steps > 1 ? o.rho_to : o.rho_from + i * step;
    const Params p(point);
    br_asymptotics a{};
    check(br_dominating_points(p.handle, &a));
    rows.push_back({point.rho, a.regime, a.gamma, a.g_min, a.minimizer_t[0],
                    a.minimizer_s[0]});
  }
  // Echo the drifts; rho varies per row.
  r.params = brcli::ParamsEcho{mu1, mu2, NAN};
  r.result = std::move(rows);
  return r;
}

brcli::RunRecord cmd_oracle(const Options& o) {
  const Params p(o);
  auto r = make_record("oracle");
  r.params = p.echo();
  br_oracle_config cfg = o.oracle;
  cfg.threads = o.threads;
  brcli::OracleRun run;
  check(br_oracle_minimize(p.handle, &cfg, &run.oracle));
  br_asymptotics a{};
  check(br_dominating_points(p.handle, &a));
  run.closed_form_g_min = a.g_min;
  run.relative_gap = std::abs(run.oracle.min_value - a.g_min) / a.g_min;
  run.tol = o.tol;
  r.result = run;
  return r;
}

brcli::RunRecord cmd_qp(const Options& o) {
  for (double v : {o.m11, o.m12, o.m22, o.b1, o.b2}) {
    if (std::isnan(v)) throw UsageError("--m11 --m12 --m22 --b1 --b2 are required");
  }
  auto r = make_record("qp");
  br_qp_solution q{};
  check(br_qp_solve(o.m11, o.m12, o.m22, o.b1, o.b2, &q));
  r.result = q;
  return r;
}

br_sim_config sim_config(const Options& o) {
  br_sim_config cfg = o.sim;
  cfg.threads = o.threads;
  cfg.antithetic = o.no_antithetic ? 0 : 1;
  cfg.importance_sampling = o.importance_sampling ? 1 : 0;
  cfg.bridge_correction = o.no_bridge ? 0 : 1;
  return cfg;
}

brcli::RunRecord cmd_simulate(const Options& o) {
  const Params p(o);
  auto r = make_record("simulate");
  r.params = p.echo();
  const br_sim_config cfg = sim_config(o);
  r.seed = cfg.seed;
  br_mc_estimate e{};
  check(br_simulate(p.handle, &cfg, &e));
  r.result = e;
  return r;
}

brcli::RunRecord cmd_ladder(const Options& o) {
  const Params p(o);
  auto r = make_record("ladder");
  r.params = p.echo();
  const br_sim_config cfg = sim_config(o);
  r.seed = cfg.seed;
  brcli::Ladder l;
  l.levels.resize(o.u_values.size());
  check(br_slope_ladder(p.handle, o.u_values.data(), o.u_values.size(), &cfg,
                        l.levels.data()));
  check(br_fit_log_slope(l.levels.data(), l.levels.size(), &l.slope,
                         &l.intercept, &l.points_used));
  r.result = std::move(l);
  return r;
}

brcli::RunRecord cmd_verify(const Options& o) {
  if (o.quick && o.full) throw UsageError("--quick and --full are exclusive");
  auto r = make_record("verify");
  struct Sink {
    brcli::VerifyTable rows;
    bool live;
  } sink{{}, !o.json && !o.csv && o.out.empty()};
  int all_passed = 0;
  check(br_verify(
      o.full ? 1 : 0,
      [](const char* name, int passed, const char* detail, double seconds,
         void* ctx) {
        auto* s = static_cast<Sink*>(ctx);
        s->rows.push_back({name, passed != 0, detail, seconds});
        if (s->live) {
          std::printf("%-4s %-28s %8.2fs  %s\n", passed ? "PASS" : "FAIL",
                      name, seconds, detail);
          std::fflush(stdout);
        }
      },
      &sink, &all_passed));
  r.result = std::move(sink.rows);
  return r;
}

bool record_failed(const brcli::RunRecord& r) {
  if (const auto* rows = std::get_if<brcli::VerifyTable>(&r.result)) {
    for (const auto& row : *rows) {
      if (!row.passed) return true;
    }
  }
  return false;
}

std::string render(const brcli::RunRecord& r, const Options& o) {
  if (o.json) return brcli::emit(r).dump(2) + "\n";
  if (o.csv) return brcli::record_csv(r);
  return brcli::record_table(r);
}

json read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw brcli::IoError("cannot read config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw UsageError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw UsageError("config file must hold a JSON object");
  return j;
}

// Applies config keys whose flag exists on `cmd` and was not given
// explicitly. Keys that name no flag of any command are rejected.
std::set<std::string> apply_config(const json& cfg, CLI::App* cmd,
                                   Options& o) {
  auto setters = config_setters(o);
  std::set<std::string> applied;
  for (const auto& [key, value] : cfg.items()) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw UsageError("unknown config key '" + key + "'");
    const CLI::Option* opt = cmd->get_option_no_throw("--" + key);
    if (opt == nullptr || opt->count() > 0) continue;
    try {
      it->second(value);
    } catch (const UsageError& e) {
      throw UsageError("config key '" + key + "': " + e.what());
    } catch (const brcli::FormatError& e) {
      throw UsageError("config key '" + key + "': " + e.what());
    } catch (const json::exception& e) {
      throw UsageError("config key '" + key + "': " + e.what());
    }
    applied.insert("--" + key);
  }
  return applied;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adjustment coefficient and dominating points for "
               "component-wise ruin of two correlated Brownian risk lines"};
  app.set_version_flag("--version", std::string(br_version()));
  app.require_subcommand(1);

  Options o;

  auto* gamma = app.add_subcommand("gamma", "Closed-form regime, gamma and minimizers");
  add_model_flags(gamma, o);
  add_output_flags(gamma, o);

  auto* sweep = app.add_subcommand("sweep", "gamma over an evenly spaced rho grid");
  sweep->add_option("--mu1", o.mu1, "Drift of line 1")->required();
  sweep->add_option("--mu2", o.mu2, "Drift of line 2")->required();
  sweep->add_flag("--sort", o.sort, "Swap the drifts if mu1 > mu2");
  sweep->add_option("--rho-from", o.rho_from, "First rho")->default_val(o.rho_from);
  sweep->add_option("--rho-to", o.rho_to, "Last rho")->default_val(o.rho_to);
  sweep->add_option("--steps", o.steps, "Number of rows")->default_val(o.steps);
  add_output_flags(sweep, o);

  auto* oracle = app.add_subcommand("oracle", "Grid-search minimum of g and gap to the closed form");
  add_model_flags(oracle, o);
  add_threads(oracle, o);
  oracle->add_option("--tol", o.tol, "Relative gap tolerance (exit 4 above it)")
      ->default_val(o.tol);
  oracle->add_option("--grid", o.oracle.initial_grid, "Nodes per axis")
      ->default_val(o.oracle.initial_grid);
  oracle->add_option("--rounds", o.oracle.refinement_rounds, "Refinement rounds")
      ->default_val(o.oracle.refinement_rounds);
  oracle->add_option("--zoom", o.oracle.zoom_factor, "Window shrink per round")
      ->default_val(o.oracle.zoom_factor);
  oracle->add_option("--box-mult", o.oracle.t_max_multiplier,
                     "Search box margin around the candidate points")
      ->default_val(o.oracle.t_max_multiplier);
  add_output_flags(oracle, o);

  auto* qp = app.add_subcommand("qp", "min x'M^-1 x subject to x >= b");
  qp->add_option("--m11", o.m11)->required();
  qp->add_option("--m12", o.m12)->required();
  qp->add_option("--m22", o.m22)->required();
  qp->add_option("--b1", o.b1)->required();
  qp->add_option("--b2", o.b2)->required();
  add_output_flags(qp, o);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of the joint ruin probability");
  add_model_flags(simulate, o);
  simulate->add_option("--u", o.sim.u, "Initial capital")->default_val(o.sim.u);
  add_sim_flags(simulate, o);
  add_output_flags(simulate, o);

  auto* ladder = app.add_subcommand("ladder", "Monte Carlo over ascending u and fitted log slope");
  add_model_flags(ladder, o);
  ladder->add_option("--u-values", o.u_values, "Ascending capitals")
      ->delimiter(',')
      ->default_str("1,1.5,2");
  add_sim_flags(ladder, o);
  add_output_flags(ladder, o);

  auto* verify = app.add_subcommand("verify", "Run the property suites");
  auto* quick = verify->add_flag("--quick", o.quick, "Reduced sizes (default)");
  verify->add_flag("--full", o.full, "Full sizes")->excludes(quick);
  add_output_flags(verify, o);

  // Config keys must be applied to exactly the flags the user did not give,
  // so the required-flag checks run after the merge.
  std::vector<std::pair<CLI::App*, CLI::Option*>> required;
  for (auto* sub : app.get_subcommands({})) {
    for (auto* opt : sub->get_options()) {
      if (opt->get_required()) {
        opt->required(false);
        required.emplace_back(sub, opt);
      }
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  CLI::App* cmd = app.get_subcommands().front();
  try {
    std::set<std::string> from_config;
    if (!o.config.empty()) from_config = apply_config(read_config(o.config), cmd, o);
    for (const auto& [sub, opt] : required) {
      if (sub == cmd && opt->count() == 0 &&
          !from_config.contains(opt->get_name())) {
        throw UsageError(opt->get_name() + " is required");
      }
    }
    if (o.json && o.csv) throw UsageError("--json and --csv are exclusive");

    const std::string name = cmd->get_name();
    brcli::RunRecord record;
    if (name == "gamma") record = cmd_gamma(o);
    else if (name == "sweep") record = cmd_sweep(o);
    else if (name == "oracle") record = cmd_oracle(o);
    else if (name == "qp") record = cmd_qp(o);
    else if (name == "simulate") record = cmd_simulate(o);
    else if (name == "ladder") record = cmd_ladder(o);
    else record = cmd_verify(o);

    const bool tabular_file = name == "sweep" || name == "ladder";
    if (!o.out.empty() && tabular_file) {
      const std::string csv =
          name == "sweep"
              ? brcli::sweep_csv(std::get<brcli::SweepTable>(record.result))
              : brcli::ladder_csv(std::get<brcli::Ladder>(record.result));
      brcli::write_file_atomic(o.out, csv);
      std::cout << render(record, o);
    } else if (!o.out.empty()) {
      brcli::write_file_atomic(o.out, render(record, o));
    } else if (name != "verify" || o.json || o.csv) {
      std::cout << render(record, o);
    }
    std::cout.flush();

    if (record_failed(record)) return kFailed;
    if (const auto* run = std::get_if<brcli::OracleRun>(&record.result)) {
      if (!(run->relative_gap <= o.tol)) {
        std::cerr << "error: relative gap " << run->relative_gap
                  << " exceeds tolerance " << o.tol << "\n";
        return kGap;
      }
    }
    return kOk;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const brcli::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const ApiError& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (e.status == BR_ERR_BOUNDARY_HIT) return kGap;
    if (e.status == BR_ERR_INTERNAL) return kFailed;
    return kUsage;
  }
}
