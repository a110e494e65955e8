#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/errors.hpp"
#include "core/sweep.hpp"
#include "core/table.hpp"

using namespace kerrpol;

namespace {

const char* kMinimalPoint =
    "[engine]\n"
    "kind = linearized\n"
    "[params]\n"
    "n_h = 1e6\n"
    "n_v = 100\n"
    "gamma_h = 1.2e-7\n"
    "gamma_v = 1e-7\n"
    "gamma = 0\n";

// Asserts that parsing fails with the expected type and a message mentioning
// every listed fragment (used to pin line numbers and key names).
template <typename E>
void expect_parse_failure(const std::string& text, const std::vector<std::string>& fragments) {
  try {
    parse_config_text(text);
    FAIL("expected the config to be rejected");
  } catch (const E& e) {
    const std::string what = e.what();
    for (const auto& f : fragments) {
      INFO("message: ", what);
      CHECK(what.find(f) != std::string::npos);
    }
  }
}

}  // namespace

TEST_CASE("a minimal point config fills every documented default") {
  const SweepConfig cfg = parse_config_text(kMinimalPoint);
  CHECK(cfg.engine == EngineKind::linearized);
  CHECK(cfg.power == PowerConvention::constant_pump);
  CHECK(cfg.tail_tol == 1e-10);
  CHECK(cfg.n_max_cap == 255);
  CHECK(cfg.arg_w == 0.0);
  CHECK(cfg.t == 1.0);
  CHECK(cfg.eta == 1.0);
  CHECK_FALSE(cfg.grid.has_value());
  CHECK(cfg.outputs == std::vector<Quantity>{Quantity::v2, Quantity::v3, Quantity::v_coh});
}

TEST_CASE("amplitudes are squared into photon numbers and exclude them") {
  const SweepConfig cfg = parse_config_text(
      "[engine]\nkind = fock\n[params]\nalpha_h = 2\nalpha_v = 0.5\n"
      "gamma_h = 1e-3\ngamma_v = 2e-4\ngamma = 3e-4\n");
  CHECK(*cfg.n_h == 4.0);
  CHECK(*cfg.n_v == 0.25);
  expect_parse_failure<SchemaError>(
      "[engine]\nkind = fock\n[params]\nn_h = 4\nalpha_h = 2\nalpha_v = 1\n"
      "gamma_h = 0\ngamma_v = 0\ngamma = 0\n",
      {"mutually exclusive", "n_h", "alpha_h"});
}

TEST_CASE("unknown sections, keys and engines are rejected with context") {
  expect_parse_failure<SchemaError>(std::string("[warp]\nspeed = 9\n") + kMinimalPoint,
                                    {"unknown section", "warp"});
  expect_parse_failure<SchemaError>(
      "[engine]\nkind = linearized\nbogus = 1\n[params]\nn_h = 1\nn_v = 2\n"
      "gamma_h = 0\ngamma_v = 0\ngamma = 0\n",
      {"unknown key", "bogus", "line 3"});
  expect_parse_failure<RangeError>(
      "[engine]\nkind = warp\n[params]\nn_h = 1\nn_v = 2\n"
      "gamma_h = 0\ngamma_v = 0\ngamma = 0\n",
      {"unknown engine", "warp"});
  expect_parse_failure<SchemaError>(
      "[engine]\npower_convention = constant_pump\n[params]\nn_h = 1\nn_v = 2\n"
      "gamma_h = 0\ngamma_v = 0\ngamma = 0\n",
      {"kind"});
}

TEST_CASE("duplicate keys and malformed values carry their line numbers") {
  expect_parse_failure<SchemaError>(
      "[engine]\nkind = linearized\nkind = fock\n[params]\nn_h = 1\nn_v = 2\n"
      "gamma_h = 0\ngamma_v = 0\ngamma = 0\n",
      {"duplicate key", "kind", "line 3"});
  expect_parse_failure<ParseError>(
      "[engine]\nkind = linearized\n[params]\nn_h = banana\nn_v = 2\n"
      "gamma_h = 0\ngamma_v = 0\ngamma = 0\n",
      {"n_h", "line 4", "banana"});
  expect_parse_failure<ParseError>("[engine\nkind = linearized\n", {"line 1"});
  expect_parse_failure<ParseError>("kind = linearized\n", {"outside any section"});
}

TEST_CASE("comments, blank lines and spacing are tolerated") {
  const SweepConfig cfg = parse_config_text(
      "# leading comment\n"
      "[engine]\n"
      "  kind =   linearized   ; trailing comment\n"
      "\n"
      "[params]  # section comment\n"
      "n_h=1e6\n"
      "n_v = 100\n"
      "gamma_h = 1.2e-7\n"
      "gamma_v = 1e-7\n"
      "gamma = 0\n");
  CHECK(cfg.engine == EngineKind::linearized);
  CHECK(*cfg.n_h == 1e6);
}

TEST_CASE("parameter ranges are enforced") {
  expect_parse_failure<RangeError>(std::string(kMinimalPoint) + "eta = 1.2\n", {"eta"});
  expect_parse_failure<RangeError>(std::string(kMinimalPoint) + "eta = 0\n", {"eta"});
  expect_parse_failure<RangeError>(std::string(kMinimalPoint) + "t = -1\n", {"t must be >= 0"});
  expect_parse_failure<RangeError>(
      "[engine]\nkind = linearized\ntail_tol = 2\n[params]\nn_h = 1\nn_v = 2\n"
      "gamma_h = 0\ngamma_v = 0\ngamma = 0\n",
      {"tail_tol"});
  expect_parse_failure<RangeError>(
      "[engine]\nkind = linearized\n[params]\nn_h = -5\nn_v = 2\n"
      "gamma_h = 0\ngamma_v = 0\ngamma = 0\n",
      {"n_h"});
}

TEST_CASE("grids demand a coherent axis description") {
  const std::string grid_base = std::string(kMinimalPoint);
  expect_parse_failure<SchemaError>(grid_base + "[grid]\nstart = 0\nstop = 1\ncount = 3\n",
                                    {"axis"});
  expect_parse_failure<SchemaError>(
      grid_base + "[grid]\naxis = time\nstart = 0\nstop = 1\ncount = 3\nvalues = 1, 2\n",
      {"mutually exclusive"});
  expect_parse_failure<SchemaError>(grid_base + "[grid]\naxis = time\nstart = 0\ncount = 3\n",
                                    {"start, stop and count"});
  expect_parse_failure<RangeError>(
      grid_base + "[grid]\naxis = time\nstart = 0\nstop = 1\ncount = 1\n", {"count"});
  expect_parse_failure<RangeError>(
      grid_base + "[grid]\naxis = time\nstart = 1\nstop = 1\ncount = 3\n", {"differ"});
  expect_parse_failure<RangeError>(grid_base + "[grid]\naxis = time\nvalues = 1, 3, 2\n",
                                   {"monotone"});
  expect_parse_failure<RangeError>(grid_base + "[grid]\naxis = time\nvalues = 0, -1\n",
                                   {">= 0"});
  expect_parse_failure<SchemaError>(grid_base + "[grid]\naxis = sideways\nvalues = 1, 2\n",
                                    {"unknown axis", "sideways"});
}

TEST_CASE("a range grid lands exactly on its endpoints") {
  const SweepConfig cfg = parse_config_text(
      std::string(kMinimalPoint) + "[grid]\naxis = time\nstart = 0\nstop = 1e-3\ncount = 11\n");
  REQUIRE(cfg.grid.has_value());
  REQUIRE(cfg.grid->points.size() == 11);
  CHECK(cfg.grid->points.front() == 0.0);
  CHECK(cfg.grid->points.back() == 1e-3);
}

TEST_CASE("axis-supplied parameters may not also be fixed") {
  expect_parse_failure<SchemaError>(
      "[engine]\nkind = linearized\n[params]\nn_h = 1e6\nn_v = 100\n"
      "gamma_h = 1e-7\ngamma_v = 0\ngamma = 0\n"
      "[grid]\naxis = seed_ratio\nvalues = 0, 1e-4\n",
      {"n_v", "seed_ratio"});
  expect_parse_failure<SchemaError>(
      "[engine]\nkind = linearized\n[params]\nn_h = 1e6\nn_v = 100\narg_w = 0.3\n"
      "gamma_h = 1e-7\ngamma_v = 0\ngamma = 0\n"
      "[grid]\naxis = phase\nvalues = 0, 1\n",
      {"arg_w", "phase"});
  expect_parse_failure<SchemaError>(
      "[engine]\nkind = linearized\n[params]\nn_h = 1e6\nn_v = 100\n"
      "gamma_h = 1e-7\ngamma_v = 0\ngamma = 0\n"
      "[grid]\naxis = anisotropy\nvalues = 0, 1e-7\n",
      {"gamma_h", "anisotropy"});
  expect_parse_failure<SchemaError>(
      "[engine]\nkind = linearized\n[params]\nn_h = 1e6\nn_v = 100\nt = 2\n"
      "gamma_h = 1e-7\ngamma_v = 0\ngamma = 0\n"
      "[grid]\naxis = time\nvalues = 0, 1\n",
      {"'t'", "time"});
}

TEST_CASE("output columns must be known, unique and angle-consistent") {
  expect_parse_failure<SchemaError>(
      std::string(kMinimalPoint) + "[outputs]\ncolumns = V2, V9\n", {"unknown output", "V9"});
  expect_parse_failure<SchemaError>(
      std::string(kMinimalPoint) + "[outputs]\ncolumns = V2, V2\n", {"duplicate output"});
  expect_parse_failure<SchemaError>(
      std::string(kMinimalPoint) + "[outputs]\ncolumns = Vtheta\n", {"Vtheta", "theta axis"});
  const SweepConfig ok = parse_config_text(std::string(kMinimalPoint) +
                                           "[grid]\naxis = theta\nvalues = 0, 0.5\n"
                                           "[outputs]\ncolumns = Vtheta, Vcoh\n");
  CHECK(ok.outputs == std::vector<Quantity>{Quantity::v_theta, Quantity::v_coh});
}

TEST_CASE("infeasible fock cutoffs are rejected before any row runs") {
  const std::string text =
      "[engine]\nkind = fock\n[params]\nn_h = 1e6\nn_v = 100\n"
      "gamma_h = 1e-7\ngamma_v = 0\ngamma = 0\n";
  expect_parse_failure<TruncationError>(text, {"fock engine cannot honor"});

  SweepConfig cfg = parse_config_text(kMinimalPoint);
  CHECK_THROWS_AS(override_engine(cfg, EngineKind::fock), TruncationError);
}

TEST_CASE("csv output is a bare header plus rows with a trailing status") {
  Table t;
  t.columns = {"x", "y"};
  t.rows = {{1.0, 0.5}, {2.0, std::nan("")}};
  t.row_status = {"ok", "domain_error"};
  CHECK(emit_table(t, TableFormat::csv, false) ==
        "x,y,status\n"
        "1,0.5,ok\n"
        "2,nan,domain_error\n");
  // Cells render with enough digits to recover the exact doubles.
  Table p;
  p.columns = {"x"};
  p.rows = {{0.1}};
  p.row_status = {"ok"};
  CHECK(emit_table(p, TableFormat::csv, false) == "x,status\n0.10000000000000001,ok\n");
}

TEST_CASE("an empty table still emits its header") {
  Table t;
  t.columns = {"a", "b"};
  CHECK(emit_table(t, TableFormat::csv, false) == "a,b,status\n");
}

TEST_CASE("a malformed table shape is an internal error") {
  Table t;
  t.columns = {"a"};
  t.rows = {{1.0, 2.0}};
  t.row_status = {"ok"};
  CHECK_THROWS_AS(emit_table(t, TableFormat::csv, false), InvariantError);
  t.rows = {{1.0}};
  t.row_status = {};
  CHECK_THROWS_AS(emit_table(t, TableFormat::csv, false), InvariantError);
}

TEST_CASE("json output round-trips through the parser") {
  Table t;
  t.info = {{"engine", "linearized"}, {"mode", "sweep"}};
  t.params = {{"n_h", 1e6}, {"t", 1.0}};
  t.columns = {"a", "b"};
  t.rows = {{0.1, std::nan("")}, {-3.5, 7.25}};
  t.row_status = {"ok", "truncation_error"};

  const std::string body = emit_table(t, TableFormat::json, false);
  const Table back = parse_table_json(body);
  CHECK(back.info.at("engine") == "linearized");
  CHECK(back.info.at("mode") == "sweep");
  CHECK(back.params.at("n_h") == 1e6);
  CHECK(back.params.at("t") == 1.0);
  CHECK(back.columns == t.columns);
  REQUIRE(back.rows.size() == 2);
  CHECK(back.rows[0][0] == 0.1);  // exact double round-trip
  CHECK(std::isnan(back.rows[0][1]));
  CHECK(back.rows[1][0] == -3.5);
  CHECK(back.rows[1][1] == 7.25);
  CHECK(back.row_status == t.row_status);
}

TEST_CASE("the json parser rejects structural damage") {
  CHECK_THROWS_AS(parse_table_json("not json"), ParseError);
  CHECK_THROWS_AS(parse_table_json("{}"), SchemaError);
  CHECK_THROWS_AS(parse_table_json(R"({"metadata": {"schema": ["a"]}, "rows": []})"),
                  SchemaError);  // schema must end with "status"
  CHECK_THROWS_AS(
      parse_table_json(R"({"metadata": {"schema": ["a", "status"]}, "rows": [[1, 2, "ok"]]})"),
      SchemaError);  // row wider than the schema
}

TEST_CASE("pinned metadata makes repeated emissions byte-identical") {
  const SweepConfig cfg = parse_config_text(kMinimalPoint);
  const std::string a = emit_table(run(cfg), TableFormat::json, true);
  const std::string b = emit_table(run(cfg), TableFormat::json, true);
  CHECK(a == b);
  CHECK(a.find("\"generated\": \"fixed\"") != std::string::npos);
  // The live stamp is ISO 8601 shaped.
  const Table live = run(cfg);
  const std::string stamp = live.info.at("generated");
  CHECK(stamp.size() == 20);
  CHECK(stamp[4] == '-');
  CHECK(stamp[10] == 'T');
  CHECK(stamp.back() == 'Z');
}

TEST_CASE("table format names are validated") {
  CHECK(table_format_from_name("csv") == TableFormat::csv);
  CHECK(table_format_from_name("json") == TableFormat::json);
  CHECK_THROWS_AS(table_format_from_name("yaml"), RangeError);
}
