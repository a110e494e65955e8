#include "core/sweep.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "core/analytic.hpp"
#include "core/detection.hpp"
#include "core/fock.hpp"
#include "core/linearized.hpp"
#include "core/version.hpp"

namespace kerrpol {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

KerrParams kerr_of(const ResolvedPoint& p) {
  return KerrParams{p.gamma_h, p.gamma_v, p.gamma, p.t};
}

PointEval eval_linearized(const ResolvedPoint& p) {
  const LinearizedResult r = linearized_variances(p.n_h, p.n_v, p.arg_w, kerr_of(p));
  PointEval out;
  out.n_h = p.n_h;
  out.n_v = p.n_v;
  out.v2 = r.v2;
  out.v3 = r.v3;
  out.cov23 = r.cov23;
  out.v_coh = r.v_coh;
  out.v_theta_min = r.v_theta_min;
  out.s1_abs = std::abs(p.n_h - p.n_v);
  out.s1_usable = p.n_h != p.n_v;
  if (p.theta) out.v_theta = linearized_variance_theta(r, *p.theta);
  return out;
}

PointEval eval_analytic(const ResolvedPoint& p) {
  const std::complex<double> alpha_h{std::sqrt(p.n_h), 0.0};
  const std::complex<double> alpha_v = std::polar(std::sqrt(p.n_v), p.arg_w);
  const ExactMoments m = exact_stokes_moments(alpha_h, alpha_v, kerr_of(p));
  const MinVariance mv = exact_min_variance(m);
  PointEval out;
  out.n_h = p.n_h;
  out.n_v = p.n_v;
  out.v2 = m.variance[2];
  out.v3 = m.variance[3];
  out.cov23 = m.cov23;
  out.v_coh = p.n_h + p.n_v;
  out.v_theta_min = mv.v_min;
  out.s1_abs = std::abs(p.n_h - p.n_v);
  out.s1_usable = p.n_h != p.n_v;
  if (p.theta) out.v_theta = exact_variance_theta(m, *p.theta);
  return out;
}

PointEval eval_fock(const ResolvedPoint& p, double tail_tol, int n_max_cap) {
  const std::complex<double> alpha_h{std::sqrt(p.n_h), 0.0};
  const std::complex<double> alpha_v = std::polar(std::sqrt(p.n_v), p.arg_w);
  const int n_max = std::max(auto_cutoff(p.n_h, tail_tol, n_max_cap),
                             auto_cutoff(p.n_v, tail_tol, n_max_cap));
  const TwoModeState state = TwoModeState::coherent(alpha_h, alpha_v, FockCutoff{n_max}, tail_tol);
  const TwoModeState evolved = kerr_evolve(state, kerr_of(p));
  const StokesMoments m = stokes_moments(evolved);

  PointEval out;
  out.n_h = p.n_h;
  out.n_v = p.n_v;
  out.v2 = m.variance[2];
  out.v3 = m.variance[3];
  out.cov23 = m.cov23;
  out.v_coh = m.mean[0];
  // Minimum of the rotated quadratic form from the measured ellipse.
  const double mid = 0.5 * (m.variance[2] + m.variance[3]);
  out.v_theta_min = mid - std::hypot(0.5 * (m.variance[2] - m.variance[3]), m.cov23);
  out.s1_abs = std::abs(m.mean[1]);
  out.s1_usable = out.s1_abs > 1e-12 * std::max(1.0, m.mean[0]);
  if (p.theta) out.v_theta = stokes_theta(evolved, *p.theta).variance;
  out.boundary_warning = m.boundary_warning;
  return out;
}

double quantity_cell(Quantity q, const PointEval& ev, const ResolvedPoint& p, bool theta_axis) {
  switch (q) {
    case Quantity::v2: return ev.v2;
    case Quantity::v3: return ev.v3;
    case Quantity::v_coh: return ev.v_coh;
    case Quantity::v_theta:
      return *ev.v_theta;  // config validation guarantees the theta axis
    case Quantity::v_theta_min: return ev.v_theta_min;
    case Quantity::s_exact:
      if (!ev.s1_usable) {
        throw DivisionDomainError("squeezing factor undefined for balanced modes");
      }
      return ev.v_theta_min / ev.s1_abs;
    case Quantity::s_approx:
      return 1.0 - 2.0 * std::abs((p.gamma_h - p.gamma_v) * p.t) * ev.n_v;
    case Quantity::db: {
      const double v_ref = theta_axis ? *ev.v_theta : ev.v_theta_min;
      return to_db(apply_efficiency(v_ref / ev.v_coh, p.eta));
    }
  }
  throw InvariantError("unhandled output quantity");
}

void fill_info(Table& table, const SweepConfig& config, const char* mode) {
  table.info["tool_version"] = kVersion;
  table.info["generated"] = utc_timestamp();
  table.info["engine"] = engine_name(config.engine);
  table.info["mode"] = mode;
  table.info["axis"] = config.grid ? axis_name(config.grid->axis) : "none";
  table.info["power_convention"] = power_convention_name(config.power);

  table.params["n_h"] = *config.n_h;
  if (config.n_v) table.params["n_v"] = *config.n_v;
  if (!config.grid || config.grid->axis != Axis::phase) table.params["arg_w"] = config.arg_w;
  if (config.gamma_h) table.params["gamma_h"] = *config.gamma_h;
  table.params["gamma_v"] = *config.gamma_v;
  table.params["gamma"] = *config.gamma;
  if (!config.grid || config.grid->axis != Axis::time) table.params["t"] = config.t;
  table.params["eta"] = config.eta;
  table.params["tail_tol"] = config.tail_tol;
  table.params["n_max_cap"] = config.n_max_cap;
}

bool is_row_recoverable(const Error& e) {
  switch (e.code()) {
    case ErrorCode::domain:
    case ErrorCode::division_domain:
    case ErrorCode::truncation:
      return true;
    default:
      return false;
  }
}

}  // namespace

ResolvedPoint resolve_point(const SweepConfig& config, std::optional<double> axis_value) {
  if (config.grid.has_value() != axis_value.has_value()) {
    throw RangeError("axis value must be given exactly when the config has a grid");
  }
  ResolvedPoint p;
  p.n_h = *config.n_h;
  p.n_v = config.n_v.value_or(0.0);
  p.arg_w = config.arg_w;
  p.gamma_h = config.gamma_h.value_or(0.0);
  p.gamma_v = *config.gamma_v;
  p.gamma = *config.gamma;
  p.t = config.t;
  p.eta = config.eta;

  if (!config.grid) return p;
  const double x = *axis_value;
  switch (config.grid->axis) {
    case Axis::seed_ratio:
      if (!(x >= 0.0)) throw RangeError("seed ratio must be >= 0");
      if (config.power == PowerConvention::constant_pump) {
        p.n_v = p.n_h * x;
      } else {
        const double total = *config.n_h;
        p.n_h = total / (1.0 + x);
        p.n_v = total * x / (1.0 + x);
      }
      break;
    case Axis::phase:
      p.arg_w = x;
      break;
    case Axis::anisotropy:
      p.gamma_h = p.gamma_v + x;
      break;
    case Axis::theta:
      p.theta = x;
      break;
    case Axis::time:
      if (!(x >= 0.0)) throw RangeError("time must be >= 0");
      p.t = x;
      break;
  }
  return p;
}

PointEval evaluate_point(EngineKind engine, const ResolvedPoint& p, double tail_tol,
                         int n_max_cap) {
  switch (engine) {
    case EngineKind::linearized: return eval_linearized(p);
    case EngineKind::analytic: return eval_analytic(p);
    case EngineKind::fock: return eval_fock(p, tail_tol, n_max_cap);
  }
  throw InvariantError("unhandled engine kind");
}

namespace {

Table run_rows(const SweepConfig& config, const char* mode) {
  Table table;
  fill_info(table, config, mode);

  const bool theta_axis = config.grid && config.grid->axis == Axis::theta;
  if (config.grid) table.columns.push_back(axis_name(config.grid->axis));
  for (Quantity q : config.outputs) table.columns.push_back(quantity_name(q));

  std::vector<std::optional<double>> axis_values;
  if (config.grid) {
    for (double x : config.grid->points) axis_values.emplace_back(x);
  } else {
    axis_values.emplace_back(std::nullopt);
  }

  for (const auto& axis_value : axis_values) {
    std::vector<double> cells;
    cells.reserve(table.columns.size());
    std::string status = "ok";
    if (axis_value) cells.push_back(*axis_value);

    const ResolvedPoint p = resolve_point(config, axis_value);
    std::optional<PointEval> ev;
    try {
      ev = evaluate_point(config.engine, p, config.tail_tol, config.n_max_cap);
    } catch (const Error& e) {
      if (!is_row_recoverable(e)) throw;
      status = error_code_name(e.code());
    }

    if (!ev) {
      cells.resize(table.columns.size(), kNan);
    } else {
      if (ev->boundary_warning) status = "boundary_warning";
      for (Quantity q : config.outputs) {
        try {
          cells.push_back(quantity_cell(q, *ev, p, theta_axis));
        } catch (const Error& e) {
          if (!is_row_recoverable(e)) throw;
          cells.push_back(kNan);
          if (status == "ok") status = error_code_name(e.code());
        }
      }
    }
    table.rows.push_back(std::move(cells));
    table.row_status.push_back(std::move(status));
  }
  return table;
}

}  // namespace

Table run_sweep(const SweepConfig& config) {
  if (!config.grid) {
    throw RangeError("run_sweep needs a [grid] section; use run_point for point configs");
  }
  return run_rows(config, "sweep");
}

Table run_point(const SweepConfig& config) {
  if (config.grid) {
    throw RangeError("run_point requires a config without [grid]");
  }
  return run_rows(config, "point");
}

Table run(const SweepConfig& config) {
  return config.grid ? run_sweep(config) : run_point(config);
}

namespace {

double phase_objective(EngineKind engine, const ResolvedPoint& base, double delta, double tail_tol,
                       int n_max_cap) {
  ResolvedPoint p = base;
  p.arg_w = delta;
  p.theta.reset();
  return evaluate_point(engine, p, tail_tol, n_max_cap).v2;
}

double total_phase_at(EngineKind engine, const ResolvedPoint& base, double delta, double tail_tol,
                      int n_max_cap) {
  ResolvedPoint p = base;
  p.arg_w = delta;
  const KerrParams kp = kerr_of(p);
  switch (engine) {
    case EngineKind::linearized:
      return linearized_phase(p.n_h, p.n_v, p.arg_w, kp);
    case EngineKind::analytic: {
      const std::complex<double> ah{std::sqrt(p.n_h), 0.0};
      const std::complex<double> av = std::polar(std::sqrt(p.n_v), p.arg_w);
      return std::arg(exact_stokes_moments(ah, av, kp).cross);
    }
    case EngineKind::fock: {
      const std::complex<double> ah{std::sqrt(p.n_h), 0.0};
      const std::complex<double> av = std::polar(std::sqrt(p.n_v), p.arg_w);
      const int n_max = std::max(auto_cutoff(p.n_h, tail_tol, n_max_cap),
                                 auto_cutoff(p.n_v, tail_tol, n_max_cap));
      const TwoModeState st =
          kerr_evolve(TwoModeState::coherent(ah, av, FockCutoff{n_max}, tail_tol), kp);
      return std::arg(stokes_moments(st).cross);
    }
  }
  throw InvariantError("unhandled engine kind");
}

}  // namespace

PhaseOptimum optimize_phase(EngineKind engine, const ResolvedPoint& base, double tail_tol,
                            int n_max_cap) {
  constexpr int kCoarse = 256;
  constexpr double kPi = 3.14159265358979323846;
  const double step = kPi / kCoarse;

  auto f = [&](double delta) {
    return phase_objective(engine, base, delta, tail_tol, n_max_cap);
  };

  std::vector<double> values(kCoarse);
  double vmin = std::numeric_limits<double>::infinity();
  double vmax = -vmin;
  double mean = 0.0;
  int best = 0;
  for (int k = 0; k < kCoarse; ++k) {
    values[k] = f(k * step);
    mean += values[k] / kCoarse;
    if (values[k] < vmin) {
      vmin = values[k];
      best = k;
    }
    vmax = std::max(vmax, values[k]);
  }

  PhaseOptimum out;
  if (vmax - vmin <= 1e-12 * (std::abs(mean) + 1.0)) {
    out.flat = true;
    out.delta_opt = 0.0;
    out.v_min = values[0];
    out.phi_total = total_phase_at(engine, base, 0.0, tail_tol, n_max_cap);
    return out;
  }

  // Local minima on the circular coarse grid, for the multimodality warning.
  double deepest = std::numeric_limits<double>::infinity();
  double shallowest = -std::numeric_limits<double>::infinity();
  int n_minima = 0;
  for (int k = 0; k < kCoarse; ++k) {
    const double prev = values[(k + kCoarse - 1) % kCoarse];
    const double next = values[(k + 1) % kCoarse];
    if (values[k] < prev && values[k] <= next) {
      ++n_minima;
      deepest = std::min(deepest, values[k]);
      shallowest = std::max(shallowest, values[k]);
    }
  }
  if (n_minima >= 2 && (shallowest - deepest) > 1e-6 * (std::abs(deepest) + 1.0)) {
    out.multimodal = true;
  }

  // Golden-section refinement inside the bracketing coarse cells.
  double a = (best - 1) * step;
  double b = (best + 1) * step;
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > 1e-11) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
  }
  double delta = 0.5 * (a + b);
  // Report the representative in [0, pi).
  delta = std::fmod(delta, kPi);
  if (delta < 0.0) delta += kPi;
  out.delta_opt = delta;
  out.v_min = f(delta);
  out.phi_total = total_phase_at(engine, base, delta, tail_tol, n_max_cap);
  return out;
}

Table run_seed_scan(const SweepConfig& config) {
  if (!config.grid || config.grid->axis != Axis::seed_ratio) {
    throw RangeError("seed scan requires a seed_ratio grid");
  }
  Table table;
  fill_info(table, config, "seed_scan");
  table.columns = {"seed_ratio", "one_minus_s"};

  for (double r : config.grid->points) {
    std::vector<double> cells{r, kNan};
    std::string status = "ok";
    try {
      const ResolvedPoint p = resolve_point(config, r);
      const PointEval ev = evaluate_point(config.engine, p, config.tail_tol, config.n_max_cap);
      if (ev.boundary_warning) status = "boundary_warning";
      if (!ev.s1_usable) {
        throw DivisionDomainError("squeezing factor undefined for balanced modes");
      }
      cells[1] = 1.0 - ev.v_theta_min / ev.s1_abs;
    } catch (const Error& e) {
      if (!is_row_recoverable(e)) throw;
      status = error_code_name(e.code());
    }
    table.rows.push_back(std::move(cells));
    table.row_status.push_back(std::move(status));
  }
  return table;
}

}  // namespace kerrpol
