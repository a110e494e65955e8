#pragma once

#include <optional>
#include <string>
#include <vector>

namespace kerrpol {

enum class EngineKind { linearized, analytic, fock };
enum class PowerConvention { constant_pump, constant_total };
enum class Axis { seed_ratio, phase, anisotropy, theta, time };
enum class Quantity { v2, v3, v_coh, v_theta, v_theta_min, s_exact, s_approx, db };

const char* engine_name(EngineKind k);
const char* power_convention_name(PowerConvention p);
const char* axis_name(Axis a);
const char* quantity_name(Quantity q);
EngineKind engine_from_name(const std::string& name);  // throws RangeError

struct GridSpec {
  Axis axis;
  std::vector<double> points;  // strictly monotone, at least 2
};

/**
 * One run description: engine choice, fixed physical parameters, an optional
 * sweep axis, and the output columns.
 *
 * Parsed from an INI-style text with sections [engine], [params], [grid],
 * [outputs]; see docs/config-format.md for the full key table. Parsing
 * validates everything eagerly: unknown keys and sections are SchemaError
 * (with the line number), malformed numbers are ParseError, out-of-range
 * values are RangeError, and a fock run whose photon numbers cannot reach the
 * tail tolerance under the cutoff cap is rejected up front with
 * TruncationError rather than failing mid-sweep.
 */
struct SweepConfig {
  EngineKind engine = EngineKind::linearized;
  PowerConvention power = PowerConvention::constant_pump;
  double tail_tol = 1e-10;
  int n_max_cap = 255;

  // Fixed parameters. n_h/n_v are mean photon numbers; configs may instead
  // give real amplitudes alpha_h/alpha_v (squared at parse time). On a
  // seed_ratio sweep n_v is derived from the axis and must be absent; on an
  // anisotropy sweep gamma_h is derived and must be absent; likewise arg_w on
  // a phase sweep and t on a time sweep.
  std::optional<double> n_h;
  std::optional<double> n_v;
  double arg_w = 0.0;
  std::optional<double> gamma_h;
  std::optional<double> gamma_v;
  std::optional<double> gamma;
  double t = 1.0;
  double eta = 1.0;

  std::optional<GridSpec> grid;  // absent: single-point run
  std::vector<Quantity> outputs = {Quantity::v2, Quantity::v3, Quantity::v_coh};
};

SweepConfig parse_config_text(const std::string& text);
SweepConfig parse_config_file(const std::string& path);  // IoError if unreadable

// Replaces the engine after parsing (command-line override). Re-checks the
// fock cutoff feasibility gate.
void override_engine(SweepConfig& config, EngineKind engine);

// Validation entry point used by both parsing and the overrides; throws on
// any inconsistency.
void validate_config(const SweepConfig& config);

}  // namespace kerrpol
