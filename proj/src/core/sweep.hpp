#pragma once

#include <optional>

#include "core/config.hpp"
#include "core/table.hpp"

namespace kerrpol {

// Physical parameters of one evaluation, after the sweep axis (if any) has
// been folded in.
struct ResolvedPoint {
  double n_h = 0.0;
  double n_v = 0.0;
  double arg_w = 0.0;
  double gamma_h = 0.0;
  double gamma_v = 0.0;
  double gamma = 0.0;
  double t = 1.0;
  double eta = 1.0;
  std::optional<double> theta;  // present only on the theta axis
};

// Folds one axis value into the fixed parameters. axis_value must be present
// exactly when the config has a grid. On a seed_ratio sweep the configured
// n_h is either the pump power (constant_pump: n_v = r n_h) or the total
// budget split between the modes (constant_total: n_h = N/(1+r),
// n_v = N r/(1+r)).
ResolvedPoint resolve_point(const SweepConfig& config, std::optional<double> axis_value);

// Engine-agnostic bundle of the quantities every output column draws from.
struct PointEval {
  double n_h = 0.0;
  double n_v = 0.0;
  double v2 = 0.0;
  double v3 = 0.0;
  double cov23 = 0.0;
  double v_coh = 0.0;       // shot-noise reference (measured <S0> on fock)
  double v_theta_min = 0.0;
  double s1_abs = 0.0;      // |<S1>| used by the squeezing-factor ratio
  bool s1_usable = true;    // false when |<S1>| is (numerically) zero
  std::optional<double> v_theta;
  bool boundary_warning = false;
};

PointEval evaluate_point(EngineKind engine, const ResolvedPoint& p, double tail_tol,
                         int n_max_cap);

// Runs the configured grid (throws RangeError when the config has none).
// Rows are emitted in grid order; a row whose evaluation hits a domain,
// division-domain or truncation failure keeps NaN cells and records the
// failure kind in its status column. Anything else propagates.
Table run_sweep(const SweepConfig& config);

// Single-point run (throws RangeError when the config has a grid).
Table run_point(const SweepConfig& config);

// Dispatches on grid presence.
Table run(const SweepConfig& config);

// Minimizes V2 over the input relative phase delta (arg_w), which is
// pi-periodic for every engine. A coarse 256-point scan over [0, pi) is
// refined by golden-section search to ~1e-11. phi_total reports the evolved
// cross-coherence phase at the optimum (arg <a_h^dag a_v>, or the linearized
// phase for that engine).
struct PhaseOptimum {
  double delta_opt = 0.0;
  double phi_total = 0.0;
  double v_min = 0.0;
  bool flat = false;        // objective is constant within 1e-12 relative
  bool multimodal = false;  // several local minima with meaningfully
                            // different depths: the reported one is global
                            // over the scan but callers should know
};

PhaseOptimum optimize_phase(EngineKind engine, const ResolvedPoint& base, double tail_tol = 1e-10,
                            int n_max_cap = 255);

// Seed-ratio scan of the squeezing factor S = Vmin / |<S1>|; emits columns
// [seed_ratio, one_minus_s, status]. Requires a seed_ratio grid.
Table run_seed_scan(const SweepConfig& config);

}  // namespace kerrpol
