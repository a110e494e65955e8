#pragma once

#include <string>
#include <vector>

namespace kerrpol {

/**
 * Built-in invariant suite, runnable from the library and the CLI. Each check
 * measures one residual at small scale and compares it against a tolerance
 * pinned here, so a report is meaningful on its own:
 *
 *   fock_unitarity              evolution preserves the state norm
 *   fock_number_conservation    photon-number marginals carried bitwise
 *   fock_v0_v1_invariance       S0/S1 statistics untouched by evolution
 *   fock_uncertainty_triplet    Vi Vj >= <Sk>^2 for the three cyclic pairs
 *   stokes_hermiticity          sparse S0..S3 are self-adjoint
 *   stokes_commutators          [Si, Sj] = 2i Sk on every basis vector
 *   fock_label_swap             swapping mode labels flips S1/S3, fixes V2/V3
 *   analytic_vs_fock_canonical  closed form vs oracle at the pinned point
 *   analytic_vs_fock_random     same, on seeded random parameter draws
 *   linearized_sum_rule         V2 + V3 = 2(n_h + n_v) to machine precision
 *   linearized_vs_analytic      ellipse drop agrees inside the validity range
 *   phase_scan_ellipse_min      input-phase optimization reaches the ellipse
 *                               minimum for both closed-form engines
 *   detection_round_trip        infer_source inverts apply_efficiency
 *   db_round_trip               from_db inverts to_db
 *
 * Fault injection: run_selftest("stokes_commutators") corrupts one matrix
 * entry before that check, proving the suite can actually fail. Unknown
 * fault names raise RangeError.
 */
struct SelfTestCheck {
  std::string name;
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
};

struct SelfTestReport {
  std::vector<SelfTestCheck> checks;
  bool all_pass = true;
};

SelfTestReport run_selftest(const std::string& inject_fault = "");

// One line per check plus a summary line, for terminal output.
std::string format_selftest(const SelfTestReport& report);

}  // namespace kerrpol
