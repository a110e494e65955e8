#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "core/analytic.hpp"
#include "core/config.hpp"
#include "core/errors.hpp"
#include "core/fig1.hpp"
#include "core/linearized.hpp"
#include "core/sweep.hpp"

using namespace kerrpol;

namespace {
constexpr double kPi = 3.14159265358979323846;

SweepConfig base_config() {
  SweepConfig cfg;
  cfg.engine = EngineKind::linearized;
  cfg.n_h = 100.0;
  cfg.n_v = 4.0;
  cfg.arg_w = 0.3;
  cfg.gamma_h = 2e-3;
  cfg.gamma_v = 1e-3;
  cfg.gamma = 5e-4;
  cfg.t = 2.0;
  return cfg;
}
}  // namespace

TEST_CASE("resolve point splits the budget per the power convention") {
  SweepConfig cfg = base_config();
  cfg.n_h = 1e10;
  cfg.n_v.reset();
  cfg.grid = GridSpec{Axis::seed_ratio, {0.0, 2.5e-5}};

  cfg.power = PowerConvention::constant_pump;
  ResolvedPoint p = resolve_point(cfg, 2.5e-5);
  CHECK(p.n_h == 1e10);
  CHECK(p.n_v == doctest::Approx(2.5e5).epsilon(1e-15));

  cfg.power = PowerConvention::constant_total;
  p = resolve_point(cfg, 2.5e-5);
  CHECK(p.n_h == doctest::Approx(1e10 / (1.0 + 2.5e-5)).epsilon(1e-15));
  CHECK(p.n_v == doctest::Approx(1e10 * 2.5e-5 / (1.0 + 2.5e-5)).epsilon(1e-15));
  CHECK(p.n_h + p.n_v == doctest::Approx(1e10).epsilon(1e-12));
}

TEST_CASE("an axis value is required exactly when the config has a grid") {
  SweepConfig cfg = base_config();
  CHECK_THROWS_AS(resolve_point(cfg, 0.5), RangeError);
  cfg.grid = GridSpec{Axis::phase, {0.0, 1.0}};
  CHECK_THROWS_AS(resolve_point(cfg, std::nullopt), RangeError);
}

TEST_CASE("each axis feeds exactly its own parameter") {
  SweepConfig cfg = base_config();

  cfg.grid = GridSpec{Axis::phase, {0.0, 1.1}};
  ResolvedPoint p = resolve_point(cfg, 1.1);
  CHECK(p.arg_w == 1.1);
  CHECK(p.n_v == 4.0);
  CHECK(p.t == 2.0);

  cfg = base_config();
  cfg.gamma_h.reset();
  cfg.grid = GridSpec{Axis::anisotropy, {0.0, 2e-4}};
  p = resolve_point(cfg, 2e-4);
  CHECK(p.gamma_h == doctest::Approx(1e-3 + 2e-4).epsilon(1e-15));

  cfg = base_config();
  cfg.grid = GridSpec{Axis::theta, {0.0, 0.7}};
  p = resolve_point(cfg, 0.7);
  REQUIRE(p.theta.has_value());
  CHECK(*p.theta == 0.7);

  cfg = base_config();
  cfg.grid = GridSpec{Axis::time, {0.0, 3.5}};
  p = resolve_point(cfg, 3.5);
  CHECK(p.t == 3.5);
  CHECK_THROWS_AS(resolve_point(cfg, -1.0), RangeError);
}

TEST_CASE("a sweep table records the axis column and per-row statuses") {
  const SweepConfig cfg = parse_config_text(
      "[engine]\n"
      "kind = linearized\n"
      "[params]\n"
      "n_h = 1e6\n"
      "gamma_h = 1.2e-7\n"
      "gamma_v = 1e-7\n"
      "gamma = 0\n"
      "[grid]\n"
      "axis = seed_ratio\n"
      "start = 0\n"
      "stop = 1e-4\n"
      "count = 5\n"
      "[outputs]\n"
      "columns = V2, V3, Vcoh, Vtheta_min\n");
  const Table t = run_sweep(cfg);
  CHECK(t.columns ==
        std::vector<std::string>{"seed_ratio", "V2", "V3", "Vcoh", "Vtheta_min"});
  REQUIRE(t.rows.size() == 5);
  for (const auto& s : t.row_status) CHECK(s == "ok");
  CHECK(t.info.at("engine") == "linearized");
  CHECK(t.info.at("axis") == "seed_ratio");
  CHECK(t.info.at("mode") == "sweep");
  CHECK(t.params.at("n_h") == 1e6);
  CHECK(t.rows.front()[0] == 0.0);
  CHECK(t.rows.back()[0] == 1e-4);
  // With no seed the ellipse is flat at the photon-number floor.
  CHECK(t.rows.front()[1] == doctest::Approx(1e6).epsilon(1e-12));
  CHECK(t.rows.front()[4] == doctest::Approx(1e6).epsilon(1e-12));
}

TEST_CASE("rows that lose their physical domain keep NaN cells and a status") {
  SweepConfig cfg = base_config();
  cfg.n_h = 1e6;
  cfg.n_v.reset();
  cfg.gamma_h = 1e-3;
  cfg.gamma_v = 0.0;
  cfg.gamma = 0.0;
  cfg.t = 1.0;
  cfg.power = PowerConvention::constant_pump;
  cfg.grid = GridSpec{Axis::seed_ratio, {1e-8, 1e-2}};
  cfg.outputs = {Quantity::v2, Quantity::db};

  const Table t = run_sweep(cfg);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.row_status[0] == "ok");
  CHECK_FALSE(std::isnan(t.rows[0][2]));
  // At the large seed the first-order minimum drops below zero, so the
  // decibel readout loses its domain; the row survives with a NaN cell.
  CHECK(t.row_status[1] == "domain_error");
  CHECK(std::isnan(t.rows[1][2]));
  CHECK_FALSE(std::isnan(t.rows[1][1]));
}

TEST_CASE("a balanced row cannot report the measured squeezing factor") {
  SweepConfig cfg = base_config();
  cfg.n_v.reset();
  cfg.power = PowerConvention::constant_pump;
  cfg.grid = GridSpec{Axis::seed_ratio, {0.5, 1.0}};
  cfg.outputs = {Quantity::v2, Quantity::s_exact};

  const Table t = run_sweep(cfg);
  CHECK(t.row_status[0] == "ok");
  CHECK(t.row_status[1] == "division_domain");
  CHECK(std::isnan(t.rows[1][2]));
}

TEST_CASE("point runs and sweeps reject each other's configs") {
  SweepConfig point = base_config();
  CHECK_THROWS_AS(run_sweep(point), RangeError);
  SweepConfig sweep = base_config();
  sweep.grid = GridSpec{Axis::phase, {0.0, 1.0}};
  CHECK_THROWS_AS(run_point(sweep), RangeError);
  CHECK(run(point).info.at("mode") == "point");
  CHECK(run(sweep).info.at("mode") == "sweep");
}

TEST_CASE("the theta axis tabulates the rotated variance directly") {
  SweepConfig cfg = base_config();
  cfg.grid = GridSpec{Axis::theta, {0.0, kPi / 2.0}};
  cfg.outputs = {Quantity::v_theta, Quantity::v2, Quantity::v3};
  const Table t = run_sweep(cfg);
  REQUIRE(t.rows.size() == 2);
  // At theta = 0 the rotated variance is V2; at pi/2 it is V3.
  CHECK(t.rows[0][1] == doctest::Approx(t.rows[0][2]).epsilon(1e-12));
  CHECK(t.rows[1][1] == doctest::Approx(t.rows[1][3]).epsilon(1e-12));
}

TEST_CASE("the phase optimizer lands on the ellipse minimum") {
  ResolvedPoint base;
  base.n_h = 1e6;
  base.n_v = 100.0;
  base.gamma_h = 1.2e-7;
  base.gamma_v = 1e-7;
  base.gamma = 0.0;
  base.t = 1.0;

  SUBCASE("first-order engine") {
    const PhaseOptimum opt = optimize_phase(EngineKind::linearized, base);
    CHECK_FALSE(opt.flat);
    const double expect = 1000100.0 - 2.0 * 2e-8 * 1e6 * 100.0;
    CHECK(opt.v_min == doctest::Approx(expect).epsilon(1e-12));
    // The optimum sits where the evolved phase is an odd quarter turn. Near
    // the minimum the objective varies as B (delta - delta*)^2 against a
    // floor of n_t, so no scan can resolve the angle better than
    // sqrt(eps n_t / B) ~ 7e-6; v_min above is the tight check.
    double m = std::fmod(opt.phi_total, kPi);
    if (m < 0) m += kPi;
    CHECK(std::abs(m - kPi / 4.0) < 5e-5);
  }

  SUBCASE("closed-form engine matches its own rotated minimum") {
    const PhaseOptimum opt = optimize_phase(EngineKind::analytic, base);
    CHECK_FALSE(opt.flat);
    const ExactMoments m = exact_stokes_moments(
        std::sqrt(1e6), std::sqrt(100.0), KerrParams{1.2e-7, 1e-7, 0.0, 1.0});
    // Minimizing over the input phase reaches the same floor as minimizing
    // the rotated quadrature angle at a fixed input phase.
    CHECK(opt.v_min == doctest::Approx(exact_min_variance(m).v_min).epsilon(1e-12));
  }
}

TEST_CASE("equal self-kerr rates make the phase objective flat") {
  ResolvedPoint base;
  base.n_h = 1e4;
  base.n_v = 25.0;
  base.gamma_h = 1e-7;
  base.gamma_v = 1e-7;
  base.gamma = 1e-7;
  base.t = 1.0;
  for (EngineKind ek : {EngineKind::linearized, EngineKind::analytic}) {
    const PhaseOptimum opt = optimize_phase(ek, base);
    CHECK(opt.flat);
    CHECK(opt.delta_opt == 0.0);
    CHECK(opt.v_min == doctest::Approx(1e4 + 25.0).epsilon(1e-12));
  }
}

TEST_CASE("the seed scan starts at zero and rises at twice the anisotropy") {
  SweepConfig cfg;
  cfg.engine = EngineKind::linearized;
  cfg.power = PowerConvention::constant_pump;
  cfg.n_h = 1e10;
  cfg.gamma_h = 1e-7;
  cfg.gamma_v = 0.0;
  cfg.gamma = 0.0;
  cfg.t = 1.0;
  cfg.grid = GridSpec{Axis::seed_ratio, {0.0, 1e-7, 2e-7}};

  const Table t = run_seed_scan(cfg);
  CHECK(t.columns == std::vector<std::string>{"seed_ratio", "one_minus_s"});
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[0][1] == 0.0);
  const double n_v1 = 1e10 * 1e-7;
  const double n_v2 = 1e10 * 2e-7;
  const double slope = (t.rows[2][1] - t.rows[1][1]) / (n_v2 - n_v1);
  CHECK(std::abs(slope / 2e-7 - 1.0) < 0.01);

  SweepConfig wrong = base_config();
  wrong.grid = GridSpec{Axis::phase, {0.0, 1.0}};
  CHECK_THROWS_AS(run_seed_scan(wrong), RangeError);
}

TEST_CASE("preset panels share the budget-splitting convention") {
  for (char panel : {'a', 'b', 'c', 'd'}) {
    const SweepConfig cfg = fig1_config(panel, EngineKind::linearized);
    CHECK(cfg.power == PowerConvention::constant_total);
    REQUIRE(cfg.grid.has_value());
    CHECK(cfg.grid->axis == Axis::seed_ratio);
    CHECK(cfg.outputs ==
          std::vector<Quantity>{Quantity::v2, Quantity::v3, Quantity::v_coh});
  }
  CHECK(fig1_config('a', EngineKind::linearized).grid->points.size() == 2001);
  CHECK(fig1_config('b', EngineKind::linearized).grid->points.size() == 1001);
  CHECK_THROWS_AS(fig1_config('e', EngineKind::linearized), RangeError);
}

TEST_CASE("the equal-rates panel never leaves the shot-noise floor") {
  const Table t = fig1_table('d', EngineKind::linearized);
  CHECK(t.info.at("panel") == "d");
  REQUIRE(t.rows.size() == 1001);
  for (const auto& row : t.rows) {
    CHECK(row[1] == row[3]);  // V2 equals the shot-noise reference exactly
    CHECK(row[2] == row[3]);
  }
}
