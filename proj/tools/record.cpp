#include "record.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <system_error>

namespace brcli {

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw FormatError(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

double real_at(const json& j, const char* key) {
  return real_from_json(field(j, key));
}

template <class T>
T int_at(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer()) {
    throw FormatError(std::string("field '") + key + "' is not an integer");
  }
  return v.get<T>();
}

bool bool_at(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_boolean()) {
    throw FormatError(std::string("field '") + key + "' is not a boolean");
  }
  return v.get<bool>();
}

std::string string_at(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_string()) {
    throw FormatError(std::string("field '") + key + "' is not a string");
  }
  return v.get<std::string>();
}

json pair_json(double a, double b) { return {real_to_json(a), real_to_json(b)}; }

void pair_from(const json& j, const char* key, double& a, double& b) {
  const json& v = field(j, key);
  if (!v.is_array() || v.size() != 2) {
    throw FormatError(std::string("field '") + key + "' is not a pair");
  }
  a = real_from_json(v[0]);
  b = real_from_json(v[1]);
}

json to_json(const br_asymptotics& a) {
  json mins = json::array();
  for (int i = 0; i < a.n_minimizers; ++i) {
    mins.push_back(pair_json(a.minimizer_t[i], a.minimizer_s[i]));
  }
  json seg = nullptr;
  if (a.has_segment) {
    seg = {{"s", real_to_json(a.segment_s)},
           {"t_lo", real_to_json(a.segment_t_lo)},
           {"t_hi", real_to_json(a.segment_t_hi)}};
  }
  return {{"regime", br_regime_name(a.regime)},
          {"case", br_regime_case(a.regime)},
          {"boundary", a.boundary != 0},
          {"minimizers", mins},
          {"segment", seg},
          {"g_min", real_to_json(a.g_min)},
          {"gamma", real_to_json(a.gamma)}};
}

br_asymptotics asymptotics_from(const json& j) {
  br_asymptotics a{};
  a.regime = regime_from_name(string_at(j, "regime"));
  a.boundary = bool_at(j, "boundary") ? 1 : 0;
  const json& mins = field(j, "minimizers");
  if (!mins.is_array() || mins.empty() || mins.size() > 2) {
    throw FormatError("minimizers must hold one or two points");
  }
  a.n_minimizers = static_cast<int>(mins.size());
  for (int i = 0; i < a.n_minimizers; ++i) {
    if (!mins[i].is_array() || mins[i].size() != 2) {
      throw FormatError("minimizer is not a pair");
    }
    a.minimizer_t[i] = real_from_json(mins[i][0]);
    a.minimizer_s[i] = real_from_json(mins[i][1]);
  }
  const json& seg = field(j, "segment");
  if (!seg.is_null()) {
    a.has_segment = 1;
    a.segment_s = real_at(seg, "s");
    a.segment_t_lo = real_at(seg, "t_lo");
    a.segment_t_hi = real_at(seg, "t_hi");
  }
  a.g_min = real_at(j, "g_min");
  a.gamma = real_at(j, "gamma");
  return a;
}

json to_json(const OracleRun& r) {
  const br_oracle_result& o = r.oracle;
  return {{"arg_min", pair_json(o.arg_min_t, o.arg_min_s)},
          {"min_value", real_to_json(o.min_value)},
          {"evaluations", o.evaluations},
          {"box_used",
           {{"t", pair_json(o.box_t_lo, o.box_t_hi)},
            {"s", pair_json(o.box_s_lo, o.box_s_hi)}}},
          {"closed_form_g_min", real_to_json(r.closed_form_g_min)},
          {"relative_gap", real_to_json(r.relative_gap)},
          {"tol", real_to_json(r.tol)}};
}

OracleRun oracle_from(const json& j) {
  OracleRun r;
  br_oracle_result& o = r.oracle;
  pair_from(j, "arg_min", o.arg_min_t, o.arg_min_s);
  o.min_value = real_at(j, "min_value");
  o.evaluations = int_at<long long>(j, "evaluations");
  const json& box = field(j, "box_used");
  pair_from(box, "t", o.box_t_lo, o.box_t_hi);
  pair_from(box, "s", o.box_s_lo, o.box_s_hi);
  r.closed_form_g_min = real_at(j, "closed_form_g_min");
  r.relative_gap = real_at(j, "relative_gap");
  r.tol = real_at(j, "tol");
  return r;
}

const char* active_set_name(br_active_set s) {
  switch (s) {
    case BR_ACTIVE_FIRST: return "{1}";
    case BR_ACTIVE_SECOND: return "{2}";
    case BR_ACTIVE_BOTH: return "{1,2}";
  }
  return "?";
}

br_active_set active_set_from(std::string_view s) {
  if (s == "{1}") return BR_ACTIVE_FIRST;
  if (s == "{2}") return BR_ACTIVE_SECOND;
  if (s == "{1,2}") return BR_ACTIVE_BOTH;
  throw FormatError("unknown active set '" + std::string(s) + "'");
}

json to_json(const br_qp_solution& q) {
  return {{"solution", pair_json(q.x1, q.x2)},
          {"active_set", active_set_name(q.active_set)},
          {"value", real_to_json(q.value)}};
}

br_qp_solution qp_from(const json& j) {
  br_qp_solution q{};
  pair_from(j, "solution", q.x1, q.x2);
  q.active_set = active_set_from(string_at(j, "active_set"));
  q.value = real_at(j, "value");
  return q;
}

json to_json(const br_mc_estimate& e) {
  return {{"u", real_to_json(e.u)},
          {"n_paths", e.n_paths},
          {"p_hat", real_to_json(e.p_hat)},
          {"ci_halfwidth_95", real_to_json(e.ci_halfwidth_95)},
          {"log_slope", real_to_json(e.log_slope)},
          {"n_joint_hits", e.n_joint_hits},
          {"marginal_hits", {e.marginal_hits[0], e.marginal_hits[1]}},
          {"marginal_p_hat", pair_json(e.marginal_p_hat[0], e.marginal_p_hat[1])},
          {"ks_distance", pair_json(e.ks_distance[0], e.ks_distance[1])},
          {"sup_correlation", real_to_json(e.sup_correlation)},
          {"importance_sampling", e.importance_sampling != 0}};
}

br_mc_estimate mc_from(const json& j) {
  br_mc_estimate e{};
  e.u = real_at(j, "u");
  e.n_paths = int_at<std::int64_t>(j, "n_paths");
  e.p_hat = real_at(j, "p_hat");
  e.ci_halfwidth_95 = real_at(j, "ci_halfwidth_95");
  e.log_slope = real_at(j, "log_slope");
  e.n_joint_hits = int_at<std::int64_t>(j, "n_joint_hits");
  const json& mh = field(j, "marginal_hits");
  if (!mh.is_array() || mh.size() != 2 || !mh[0].is_number_integer() ||
      !mh[1].is_number_integer()) {
    throw FormatError("marginal_hits must be a pair of integers");
  }
  e.marginal_hits[0] = mh[0].get<std::int64_t>();
  e.marginal_hits[1] = mh[1].get<std::int64_t>();
  pair_from(j, "marginal_p_hat", e.marginal_p_hat[0], e.marginal_p_hat[1]);
  pair_from(j, "ks_distance", e.ks_distance[0], e.ks_distance[1]);
  e.sup_correlation = real_at(j, "sup_correlation");
  e.importance_sampling = bool_at(j, "importance_sampling") ? 1 : 0;
  return e;
}

json to_json(const Ladder& l) {
  json levels = json::array();
  for (const auto& e : l.levels) levels.push_back(to_json(e));
  return {{"levels", levels},
          {"fit",
           {{"slope", real_to_json(l.slope)},
            {"intercept", real_to_json(l.intercept)},
            {"points_used", l.points_used}}}};
}

Ladder ladder_from(const json& j) {
  Ladder l;
  const json& levels = field(j, "levels");
  if (!levels.is_array()) throw FormatError("levels must be an array");
  for (const auto& e : levels) l.levels.push_back(mc_from(e));
  const json& fit = field(j, "fit");
  l.slope = real_at(fit, "slope");
  l.intercept = real_at(fit, "intercept");
  l.points_used = int_at<int>(fit, "points_used");
  return l;
}

json to_json(const SweepTable& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"rho", real_to_json(r.rho)},
                   {"regime", br_regime_name(r.regime)},
                   {"gamma", real_to_json(r.gamma)},
                   {"g_min", real_to_json(r.g_min)},
                   {"t0_t", real_to_json(r.t0_t)},
                   {"t0_s", real_to_json(r.t0_s)}});
  }
  return out;
}

SweepTable sweep_from(const json& j) {
  if (!j.is_array()) throw FormatError("sweep result must be an array");
  SweepTable rows;
  for (const auto& r : j) {
    rows.push_back({real_at(r, "rho"), regime_from_name(string_at(r, "regime")),
                    real_at(r, "gamma"), real_at(r, "g_min"),
                    real_at(r, "t0_t"), real_at(r, "t0_s")});
  }
  return rows;
}

json to_json(const VerifyTable& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"name", r.name},
                   {"passed", r.passed},
                   {"detail", r.detail},
                   {"seconds", real_to_json(r.seconds)}});
  }
  return out;
}

VerifyTable verify_from(const json& j) {
  if (!j.is_array()) throw FormatError("verify result must be an array");
  VerifyTable rows;
  for (const auto& r : j) {
    rows.push_back({string_at(r, "name"), bool_at(r, "passed"),
                    string_at(r, "detail"), real_at(r, "seconds")});
  }
  return rows;
}

Payload payload_from(const std::string& command, const json& j) {
  if (command == "gamma") return asymptotics_from(j);
  if (command == "oracle") return oracle_from(j);
  if (command == "qp") return qp_from(j);
  if (command == "simulate") return mc_from(j);
  if (command == "ladder") return ladder_from(j);
  if (command == "sweep") return sweep_from(j);
  if (command == "verify") return verify_from(j);
  throw FormatError("unknown command '" + command + "'");
}

std::string human(double x) {
  if (std::isnan(x)) return "NaN";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(10) << x;
  return os.str();
}

std::string estimate_row(const br_mc_estimate& e) {
  return csv_line({format_real(e.u), std::to_string(e.n_paths),
                   format_real(e.p_hat), format_real(e.ci_halfwidth_95),
                   format_real(e.log_slope), std::to_string(e.n_joint_hits),
                   std::to_string(e.marginal_hits[0]),
                   std::to_string(e.marginal_hits[1]),
                   format_real(e.ks_distance[0]), format_real(e.ks_distance[1]),
                   format_real(e.sup_correlation)});
}

const std::vector<std::string> kEstimateHeader = {
    "u",      "n_paths",         "p_hat",           "ci_halfwidth_95",
    "log_slope", "n_joint_hits", "marginal_hits_1", "marginal_hits_2",
    "ks_distance_1", "ks_distance_2", "sup_correlation"};

void estimate_table(std::ostream& os, const br_mc_estimate& e) {
  os << "u                 " << human(e.u) << "\n"
     << "paths             " << e.n_paths << "\n"
     << "p_hat             " << human(e.p_hat) << " +/- "
     << human(e.ci_halfwidth_95) << " (95%)\n"
     << "log_slope         " << human(e.log_slope) << "\n"
     << "joint hits        " << e.n_joint_hits << "\n"
     << "marginal hits     " << e.marginal_hits[0] << ", "
     << e.marginal_hits[1] << "\n"
     << "marginal p_hat    " << human(e.marginal_p_hat[0]) << ", "
     << human(e.marginal_p_hat[1]) << "\n";
  if (!e.importance_sampling) {
    os << "KS vs Exp(2 mu_i) " << human(e.ks_distance[0]) << ", "
       << human(e.ks_distance[1]) << "\n"
       << "sup correlation   " << human(e.sup_correlation) << "\n";
  } else {
    os << "importance sampling on\n";
  }
}

}  // namespace

json real_to_json(double x) {
  if (std::isnan(x)) return "NaN";
  if (std::isinf(x)) return x > 0 ? "Infinity" : "-Infinity";
  return x;
}

double real_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "NaN") return std::numeric_limits<double>::quiet_NaN();
    if (s == "Infinity") return std::numeric_limits<double>::infinity();
    if (s == "-Infinity") return -std::numeric_limits<double>::infinity();
  }
  throw FormatError("expected a real number, got " + j.dump());
}

br_regime regime_from_name(std::string_view name) {
  for (int r = BR_REGIME_NEG_RHO; r <= BR_REGIME_SUPER_RHO2; ++r) {
    if (name == br_regime_name(static_cast<br_regime>(r))) {
      return static_cast<br_regime>(r);
    }
  }
  throw FormatError("unknown regime '" + std::string(name) + "'");
}

json emit(const RunRecord& record) {
  json params = nullptr;
  if (record.params) {
    params = {{"mu1", real_to_json(record.params->mu1)},
              {"mu2", real_to_json(record.params->mu2)},
              {"rho", real_to_json(record.params->rho)}};
  }
  json seed = nullptr;
  if (record.seed) seed = *record.seed;
  json result = std::visit([](const auto& p) { return to_json(p); }, record.result);
  return {{"command", record.command},
          {"params", params},
          {"result", result},
          {"tool_version", record.tool_version},
          {"seed", seed}};
}

RunRecord parse(const json& j) {
  if (!j.is_object()) throw FormatError("record must be a JSON object");
  RunRecord r;
  r.command = string_at(j, "command");
  const json& params = field(j, "params");
  if (!params.is_null()) {
    r.params = ParamsEcho{real_at(params, "mu1"), real_at(params, "mu2"),
                          real_at(params, "rho")};
  }
  r.result = payload_from(r.command, field(j, "result"));
  r.tool_version = string_at(j, "tool_version");
  const json& seed = field(j, "seed");
  if (!seed.is_null()) {
    if (!seed.is_number_unsigned()) {
      throw FormatError("seed must be an unsigned integer");
    }
    r.seed = seed.get<std::uint64_t>();
  }
  return r;
}

std::string format_real(double x) {
  if (std::isnan(x)) return "NaN";
  if (std::isinf(x)) return x > 0 ? "Infinity" : "-Infinity";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(s);
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_line(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_field(fields[i]);
  }
  out += '\n';
  return out;
}

std::string sweep_csv(const SweepTable& rows) {
  std::string out =
      csv_line({"rho", "regime", "gamma", "g_min", "t0_t", "t0_s"});
  for (const auto& r : rows) {
    out += csv_line({format_real(r.rho), br_regime_name(r.regime),
                     format_real(r.gamma), format_real(r.g_min),
                     format_real(r.t0_t), format_real(r.t0_s)});
  }
  return out;
}

std::string ladder_csv(const Ladder& ladder) {
  std::string out = csv_line(kEstimateHeader);
  for (const auto& e : ladder.levels) out += estimate_row(e);
  return out;
}

std::string record_csv(const RunRecord& record) {
  struct Visitor {
    std::string operator()(const br_asymptotics& a) const {
      return sweep_csv({{rho, a.regime, a.gamma, a.g_min, a.minimizer_t[0],
                         a.minimizer_s[0]}});
    }
    std::string operator()(const OracleRun& r) const {
      const auto& o = r.oracle;
      return csv_line({"arg_min_t", "arg_min_s", "min_value", "evaluations",
                       "closed_form_g_min", "relative_gap"}) +
             csv_line({format_real(o.arg_min_t), format_real(o.arg_min_s),
                       format_real(o.min_value), std::to_string(o.evaluations),
                       format_real(r.closed_form_g_min),
                       format_real(r.relative_gap)});
    }
    std::string operator()(const br_qp_solution& q) const {
      return csv_line({"x1", "x2", "active_set", "value"}) +
             csv_line({format_real(q.x1), format_real(q.x2),
                       active_set_name(q.active_set), format_real(q.value)});
    }
    std::string operator()(const br_mc_estimate& e) const {
      return csv_line(kEstimateHeader) + estimate_row(e);
    }
    std::string operator()(const Ladder& l) const { return ladder_csv(l); }
    std::string operator()(const SweepTable& t) const { return sweep_csv(t); }
    std::string operator()(const VerifyTable& t) const {
      std::string out = csv_line({"name", "passed", "seconds", "detail"});
      for (const auto& r : t) {
        out += csv_line({r.name, r.passed ? "true" : "false",
                         format_real(r.seconds), r.detail});
      }
      return out;
    }
    double rho;
  };
  return std::visit(Visitor{record.params ? record.params->rho : 0.0},
                    record.result);
}

std::string record_table(const RunRecord& record) {
  std::ostringstream os;
  if (record.params) {
    os << "mu1 = " << human(record.params->mu1)
       << ", mu2 = " << human(record.params->mu2);
    if (!std::isnan(record.params->rho)) {
      os << ", rho = " << human(record.params->rho);
    }
    os << "\n";
  }
  struct Visitor {
    std::ostream& os;
    void operator()(const br_asymptotics& a) const {
      os << "regime            (" << br_regime_case(a.regime) << ") "
         << br_regime_name(a.regime) << (a.boundary ? " [boundary]" : "")
         << "\n"
         << "gamma             " << human(a.gamma) << "\n"
         << "g_min             " << human(a.g_min) << "\n";
      for (int i = 0; i < a.n_minimizers; ++i) {
        os << "minimizer         (" << human(a.minimizer_t[i]) << ", "
           << human(a.minimizer_s[i]) << ")\n";
      }
      if (a.has_segment) {
        os << "minimizing set    s = " << human(a.segment_s) << ", t in ["
           << human(a.segment_t_lo) << ", " << human(a.segment_t_hi) << "]\n";
      }
    }
    void operator()(const OracleRun& r) const {
      const auto& o = r.oracle;
      os << "arg_min           (" << human(o.arg_min_t) << ", "
         << human(o.arg_min_s) << ")\n"
         << "min_value         " << human(o.min_value) << "\n"
         << "closed-form g_min " << human(r.closed_form_g_min) << "\n"
         << "relative gap      " << human(r.relative_gap) << " (tol "
         << human(r.tol) << ")\n"
         << "evaluations       " << o.evaluations << "\n"
         << "box               t in [" << human(o.box_t_lo) << ", "
         << human(o.box_t_hi) << "], s in [" << human(o.box_s_lo) << ", "
         << human(o.box_s_hi) << "]\n";
    }
    void operator()(const br_qp_solution& q) const {
      os << "solution          (" << human(q.x1) << ", " << human(q.x2)
         << ")\n"
         << "active set        " << active_set_name(q.active_set) << "\n"
         << "value             " << human(q.value) << "\n";
    }
    void operator()(const br_mc_estimate& e) const { estimate_table(os, e); }
    void operator()(const Ladder& l) const {
      char line[160];
      std::snprintf(line, sizeof line, "%10s %14s %12s %12s %8s\n", "u",
                    "p_hat", "ci95", "log_slope", "hits");
      os << line;
      for (const auto& e : l.levels) {
        std::snprintf(line, sizeof line, "%10.4g %14.6g %12.4g %12.6g %8lld\n",
                      e.u, e.p_hat, e.ci_halfwidth_95, e.log_slope,
                      static_cast<long long>(e.n_joint_hits));
        os << line;
      }
      os << "fitted slope      " << human(l.slope) << " (" << l.points_used
         << " levels)\n";
    }
    void operator()(const SweepTable& t) const {
      char line[160];
      std::snprintf(line, sizeof line, "%10s %-11s %14s %14s %12s %12s\n",
                    "rho", "regime", "gamma", "g_min", "t0_t", "t0_s");
      os << line;
      for (const auto& r : t) {
        std::snprintf(line, sizeof line,
                      "%10.6g %-11s %14.10g %14.10g %12.6g %12.6g\n", r.rho,
                      br_regime_name(r.regime), r.gamma, r.g_min, r.t0_t,
                      r.t0_s);
        os << line;
      }
    }
    void operator()(const VerifyTable& t) const {
      for (const auto& r : t) {
        char line[96];
        std::snprintf(line, sizeof line, "%-4s %-28s %8.2fs  ",
                      r.passed ? "PASS" : "FAIL", r.name.c_str(), r.seconds);
        os << line << r.detail << "\n";
      }
    }
  };
  std::visit(Visitor{os}, record.result);
  return os.str();
}

void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content) {
  namespace fs = std::filesystem;
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw IoError("cannot rename onto '" + path.string() + "': " + ec.message());
  }
}

}  // namespace brcli
