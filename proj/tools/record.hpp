#pragma once

// JSON envelope and CSV output for the brownruin command-line tool. Built
// only on the C API so the tool exercises the same surface as other callers.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "brownruin/brownruin.h"

namespace brcli {

using nlohmann::json;

struct ParamsEcho {
  double mu1 = 0, mu2 = 0, rho = 0;
};

struct SweepRow {
  double rho = 0;
  br_regime regime = BR_REGIME_NEG_RHO;
  double gamma = 0, g_min = 0, t0_t = 0, t0_s = 0;
};
using SweepTable = std::vector<SweepRow>;

struct OracleRun {
  br_oracle_result oracle{};
  double closed_form_g_min = 0;
  double relative_gap = 0;
  double tol = 0;
};

struct Ladder {
  std::vector<br_mc_estimate> levels;
  double slope = 0, intercept = 0;
  int points_used = 0;
};

struct VerifyRow {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0;
};
using VerifyTable = std::vector<VerifyRow>;

using Payload = std::variant<br_asymptotics, OracleRun, br_qp_solution,
                             br_mc_estimate, Ladder, SweepTable, VerifyTable>;

struct RunRecord {
  std::string command;
  std::optional<ParamsEcho> params;
  Payload result;
  std::string tool_version;
  std::optional<std::uint64_t> seed;
};

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite reals travel as the strings "NaN", "Infinity", "-Infinity".
json real_to_json(double x);
double real_from_json(const json& j);

json emit(const RunRecord& record);
// Throws FormatError on a malformed or unknown record.
RunRecord parse(const json& j);

// Shortest decimal that reads back to the same double; '.' separator.
std::string format_real(double x);
// RFC 4180 quoting: fields containing , " CR or LF are quoted, quotes doubled.
std::string csv_field(std::string_view s);
std::string csv_line(const std::vector<std::string>& fields);

std::string sweep_csv(const SweepTable& rows);
std::string ladder_csv(const Ladder& ladder);
// CSV view of any record; tabular payloads give one row per entry.
std::string record_csv(const RunRecord& record);
// Human-readable view.
std::string record_table(const RunRecord& record);

// Throws FormatError for an unknown name.
br_regime regime_from_name(std::string_view name);

// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content);

}  // namespace brcli
