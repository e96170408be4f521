#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "record.hpp"

using namespace brcli;

namespace {

std::string round_trip(const RunRecord& r) {
  const std::string once = emit(r).dump();
  return emit(parse(json::parse(once))).dump();
}

}  // namespace

TEST_CASE("non-finite reals travel as strings") {
  CHECK(real_to_json(NAN) == "NaN");
  CHECK(real_to_json(INFINITY) == "Infinity");
  CHECK(real_to_json(-INFINITY) == "-Infinity");
  CHECK(real_to_json(0.5) == 0.5);
  CHECK(std::isnan(real_from_json("NaN")));
  CHECK(real_from_json("-Infinity") == -INFINITY);
  CHECK(real_from_json(3) == 3);
  CHECK_THROWS_AS(real_from_json("nan"), FormatError);
  CHECK_THROWS_AS(real_from_json(json::array()), FormatError);
}

TEST_CASE("emit then parse is the identity on the text") {
  RunRecord gamma{"gamma", ParamsEcho{1, 2, 0.9}, br_asymptotics{}, "0.1.0", {}};
  auto& a = std::get<br_asymptotics>(gamma.result);
  a.regime = BR_REGIME_SUPER_RHO2;
  a.boundary = 0;
  a.n_minimizers = 1;
  a.minimizer_t[0] = a.minimizer_s[0] = 0.5;
  a.has_segment = 1;
  a.segment_s = 0.5;
  a.segment_t_lo = 1 / 2.6;
  a.segment_t_hi = 0.8;
  a.g_min = 8;
  a.gamma = 4;
  CHECK(round_trip(gamma) == emit(gamma).dump());

  br_mc_estimate e{};
  e.u = 2;
  e.n_paths = 100;
  e.p_hat = 0;
  e.log_slope = NAN;
  e.ks_distance[0] = e.ks_distance[1] = NAN;
  e.sup_correlation = -INFINITY;
  RunRecord sim{"simulate", ParamsEcho{1, 1, 0}, e, "0.1.0", 7};
  CHECK(round_trip(sim) == emit(sim).dump());
  const RunRecord back = parse(emit(sim));
  CHECK(back.seed == 7);
  CHECK(std::isnan(std::get<br_mc_estimate>(back.result).log_slope));

  SweepTable rows{{-0.5, BR_REGIME_NEG_RHO, 8, 16, 2, 1.0 / 3},
                  {0.9, BR_REGIME_SUPER_RHO2, 4, 8, 0.5, 0.5}};
  RunRecord sweep{"sweep", ParamsEcho{1, 2, NAN}, rows, "0.1.0", {}};
  CHECK(round_trip(sweep) == emit(sweep).dump());

  Ladder ladder{{e, e}, NAN, NAN, 0};
  RunRecord lad{"ladder", ParamsEcho{1, 1, 0}, ladder, "0.1.0", 3};
  CHECK(round_trip(lad) == emit(lad).dump());

  RunRecord ver{"verify", {}, VerifyTable{{"a", true, "x, \"y\"", 0.25}}, "0.1.0", {}};
  CHECK(round_trip(ver) == emit(ver).dump());

  br_oracle_result o{1, 1, 8, 1000, 0.1, 4, 0.1, 4};
  RunRecord orc{"oracle", ParamsEcho{1, 1, 0}, OracleRun{o, 8, 0, 1e-5}, "0.1.0", {}};
  CHECK(round_trip(orc) == emit(orc).dump());

  RunRecord qp{"qp", {}, br_qp_solution{1, 0.9, BR_ACTIVE_FIRST, 1}, "0.1.0", {}};
  CHECK(round_trip(qp) == emit(qp).dump());
}

TEST_CASE("parse rejects malformed records") {
  CHECK_THROWS_AS(parse(json::object()), FormatError);
  CHECK_THROWS_AS(parse(json{{"command", "nope"}, {"result", json::object()},
                             {"tool_version", "x"}}),
                  FormatError);
  CHECK_THROWS_AS(parse(json{{"command", "qp"}, {"result", json::object()},
                             {"tool_version", "x"}}),
                  FormatError);
}

TEST_CASE("shortest round-trip decimal") {
  CHECK(format_real(0.1) == "0.1");
  CHECK(format_real(4) == "4");
  const double third = 1.0 / 3;
  CHECK(std::stod(format_real(third)) == third);
  CHECK(format_real(NAN) == "NaN");
  CHECK(format_real(-INFINITY) == "-Infinity");
}

TEST_CASE("csv quoting and line endings") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
  CHECK(csv_line({"a", "b,c"}) == "a,\"b,c\"\n");

  const std::string s = sweep_csv({{0.75, BR_REGIME_AT_RHO2, 4, 8, 0.5, 0.5}});
  CHECK(s == "rho,regime,gamma,g_min,t0_t,t0_s\n0.75,AT_RHO2,4,8,0.5,0.5\n");
  CHECK(regime_from_name("AT_RHO2") == BR_REGIME_AT_RHO2);
  CHECK_THROWS_AS(regime_from_name("nope"), FormatError);
}

TEST_CASE("atomic file writes") {
  const auto dir = std::filesystem::temp_directory_path() / "brownruin-record-test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "out.csv";
  write_file_atomic(path, "first\n");
  write_file_atomic(path, "second\n");
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == "second\n");
  CHECK(!std::filesystem::exists(dir / "out.csv.tmp"));
  CHECK_THROWS_AS(write_file_atomic(dir / "missing" / "x.csv", "x"), IoError);
  std::filesystem::remove_all(dir);
}
