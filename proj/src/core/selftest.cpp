#include "core/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <random>

#include "core/analytic.hpp"
#include "core/detection.hpp"
#include "core/errors.hpp"
#include "core/fock.hpp"
#include "core/linearized.hpp"
#include "core/sweep.hpp"

namespace kerrpol {

namespace {

double rel_gap(double a, double b, double floor_scale) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor_scale});
}

double check_fock_unitarity() {
  const TwoModeState st = TwoModeState::coherent({1.1, 0.3}, {0.0, 0.9}, FockCutoff{40}, 1e-10);
  const TwoModeState ev = kerr_evolve(st, KerrParams{2e-3, 7e-4, 5e-4, 1.0});
  return std::max(std::abs(st.norm_sq() - 1.0), std::abs(ev.norm_sq() - 1.0));
}

double check_number_conservation() {
  const TwoModeState st = TwoModeState::coherent({1.4, 0.0}, {0.5, 0.5}, FockCutoff{40}, 1e-10);
  const TwoModeState ev = kerr_evolve(st, KerrParams{1e-3, 4e-4, 2e-4, 2.0});
  double worst = 0.0;
  for (int n = 0; n < st.dim(); ++n) {
    worst = std::max(worst, std::abs(st.marginal_h()[n] - ev.marginal_h()[n]));
    worst = std::max(worst, std::abs(st.marginal_v()[n] - ev.marginal_v()[n]));
  }
  return worst;
}

double check_v0_v1_invariance() {
  const TwoModeState st = TwoModeState::coherent({1.3, 0.0}, {0.4, 0.6}, FockCutoff{40}, 1e-10);
  const TwoModeState ev = kerr_evolve(st, KerrParams{3e-3, 1e-3, 5e-4, 1.0});
  const StokesMoments a = stokes_moments(st);
  const StokesMoments b = stokes_moments(ev);
  double worst = 0.0;
  for (int i = 0; i < 2; ++i) {
    worst = std::max(worst, rel_gap(a.mean[i], b.mean[i], 1.0));
    worst = std::max(worst, rel_gap(a.variance[i], b.variance[i], 1.0));
  }
  return worst;
}

double check_uncertainty_triplet() {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> mag_h(0.3, 1.8), mag_v(0.1, 1.2);
  std::uniform_real_distribution<double> phase(0.0, 6.283185307179586);
  std::uniform_real_distribution<double> rate(-2e-3, 2e-3);
  double worst = 0.0;
  for (int k = 0; k < 5; ++k) {
    const auto ah = std::polar(mag_h(rng), phase(rng));
    const auto av = std::polar(mag_v(rng), phase(rng));
    const TwoModeState st = TwoModeState::coherent(ah, av, FockCutoff{40}, 1e-10);
    const TwoModeState ev = kerr_evolve(st, KerrParams{rate(rng), rate(rng), rate(rng), 1.0});
    const StokesMoments m = stokes_moments(ev);
    // Products of variances against the squared mean of the cyclic partner:
    // (V1,V2|S3), (V2,V3|S1), (V3,V1|S2).
    const double pairs[3][3] = {
        {m.variance[1], m.variance[2], m.mean[3]},
        {m.variance[2], m.variance[3], m.mean[1]},
        {m.variance[3], m.variance[1], m.mean[2]},
    };
    for (const auto& p : pairs) {
      const double lhs = p[0] * p[1];
      const double rhs = p[2] * p[2];
      worst = std::max(worst, (rhs - lhs) / std::max(1.0, rhs));
    }
  }
  return std::max(worst, 0.0);
}

double check_hermiticity() {
  const StokesMatrices m = build_stokes_matrices(FockCutoff{6});
  for (const SparseMatrix* sm : {&m.s0, &m.s1, &m.s2, &m.s3}) {
    if (!sm->is_hermitian(1e-14)) return 1.0;
  }
  return 0.0;
}

double check_commutators(bool inject_fault) {
  constexpr int kNMax = 6;
  StokesMatrices m = build_stokes_matrices(FockCutoff{kNMax});
  if (inject_fault && !m.s3.entries.empty()) {
    m.s3.entries.front().val = -m.s3.entries.front().val;
  }
  const int d = kNMax + 1;
  const int dim = m.s0.dim;
  const std::complex<double> two_i{0.0, 2.0};

  struct Triple {
    const SparseMatrix *a, *b, *c;  // [a, b] = 2i c
  };
  const Triple triples[3] = {{&m.s1, &m.s2, &m.s3}, {&m.s2, &m.s3, &m.s1}, {&m.s3, &m.s1, &m.s2}};

  // The ladder products conserve the total photon number, so the algebra is
  // exact on every complete shell n + m <= n_max; shells above that are
  // clipped by the per-mode cutoff and carry genuine truncation defects.
  // Restrict the check to the complete shells.
  double worst = 0.0;
  std::vector<std::complex<double>> e(dim, {0.0, 0.0});
  for (int n = 0; n < d; ++n) {
    for (int mm = 0; n + mm <= kNMax && mm < d; ++mm) {
      const int basis = n * d + mm;
      e[basis] = 1.0;
      for (const Triple& tr : triples) {
        const auto ab = tr.a->apply(tr.b->apply(e));
        const auto ba = tr.b->apply(tr.a->apply(e));
        const auto cc = tr.c->apply(e);
        for (int i = 0; i < dim; ++i) {
          worst = std::max(worst, std::abs(ab[i] - ba[i] - two_i * cc[i]));
        }
      }
      e[basis] = 0.0;
    }
  }
  return worst;
}

double check_label_swap() {
  const std::complex<double> ah{1.3, 0.0};
  const std::complex<double> av = std::polar(0.7, 0.4);
  const KerrParams fwd{2e-3, 7e-4, 5e-4, 1.0};
  const KerrParams swp{7e-4, 2e-3, 5e-4, 1.0};
  const StokesMoments a =
      stokes_moments(kerr_evolve(TwoModeState::coherent(ah, av, FockCutoff{40}, 1e-10), fwd));
  const StokesMoments b =
      stokes_moments(kerr_evolve(TwoModeState::coherent(av, ah, FockCutoff{40}, 1e-10), swp));
  const double scale = std::max(1.0, a.mean[0]);
  double worst = 0.0;
  worst = std::max(worst, std::abs(a.mean[0] - b.mean[0]) / scale);
  worst = std::max(worst, std::abs(a.mean[1] + b.mean[1]) / scale);
  worst = std::max(worst, std::abs(a.mean[2] - b.mean[2]) / scale);
  worst = std::max(worst, std::abs(a.mean[3] + b.mean[3]) / scale);
  worst = std::max(worst, std::abs(a.variance[2] - b.variance[2]) / scale);
  worst = std::max(worst, std::abs(a.variance[3] - b.variance[3]) / scale);
  worst = std::max(worst, std::abs(a.cov23 + b.cov23) / scale);
  return worst;
}

double compare_analytic_fock(std::complex<double> ah, std::complex<double> av,
                             const KerrParams& kp, int n_max) {
  const ExactMoments ex = exact_stokes_moments(ah, av, kp);
  const StokesMoments fk =
      stokes_moments(kerr_evolve(TwoModeState::coherent(ah, av, FockCutoff{n_max}, 1e-9), kp));
  const double n_t = ex.mean[0];
  double worst = 0.0;
  worst = std::max(worst, rel_gap(ex.mean[2], fk.mean[2], n_t));
  worst = std::max(worst, rel_gap(ex.mean[3], fk.mean[3], n_t));
  worst = std::max(worst, rel_gap(ex.variance[2], fk.variance[2], n_t));
  worst = std::max(worst, rel_gap(ex.variance[3], fk.variance[3], n_t));
  worst = std::max(worst, rel_gap(ex.cov23, fk.cov23, n_t));
  return worst;
}

double check_analytic_vs_fock_canonical() {
  return compare_analytic_fock({2.0, 0.0}, {0.5, 0.0}, KerrParams{1e-3, 2e-4, 3e-4, 1.0}, 60);
}

double check_analytic_vs_fock_random() {
  std::mt19937 rng(777);
  std::uniform_real_distribution<double> mag_h(0.2, 2.0), mag_v(0.1, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 6.283185307179586);
  std::uniform_real_distribution<double> rate(-2e-3, 2e-3);
  double worst = 0.0;
  for (int k = 0; k < 5; ++k) {
    const auto ah = std::polar(mag_h(rng), phase(rng));
    const auto av = std::polar(mag_v(rng), phase(rng));
    const KerrParams kp{rate(rng), rate(rng), rate(rng), 1.0};
    worst = std::max(worst, compare_analytic_fock(ah, av, kp, 60));
  }
  return worst;
}

double check_linearized_sum_rule() {
  std::mt19937 rng(4242);
  std::uniform_real_distribution<double> pow10(0.0, 9.0);
  std::uniform_real_distribution<double> phase(0.0, 6.283185307179586);
  std::uniform_real_distribution<double> rate(-1e-8, 1e-8);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double n_h = std::pow(10.0, pow10(rng));
    const double n_v = std::pow(10.0, pow10(rng));
    const KerrParams kp{rate(rng), rate(rng), rate(rng), 1.0};
    const LinearizedResult r = linearized_variances(n_h, n_v, phase(rng), kp);
    const double sum = r.v2 + r.v3;
    worst = std::max(worst, std::abs(sum - 2.0 * (n_h + n_v)) / (2.0 * (n_h + n_v)));
  }
  return worst;
}

double check_linearized_vs_analytic() {
  // Deep inside the validity range: the phase-diffusion terms the linear
  // model omits scale as n_h * dgamma * t ~ 1e-3 of the ellipse drop here.
  const double n_h = 1e6, n_v = 1e4;
  const KerrParams kp{1.5e-9, 5e-10, 5e-10, 1.0};
  const LinearizedResult lin = linearized_variances(n_h, n_v, 0.0, kp);
  const ExactMoments ex =
      exact_stokes_moments({std::sqrt(n_h), 0.0}, {std::sqrt(n_v), 0.0}, kp);
  const MinVariance mv = exact_min_variance(ex);
  const double drop_lin = lin.v_coh - lin.v_theta_min;
  const double drop_ex = (ex.mean[0]) - mv.v_min;
  return std::abs(drop_lin - drop_ex) / std::max(drop_ex, 1e-300);
}

double check_phase_scan_ellipse_min() {
  ResolvedPoint base;
  base.n_h = 1e6;
  base.n_v = 100.0;
  base.gamma_h = 1.2e-7;
  base.gamma_v = 1e-7;
  base.gamma = 0.0;
  base.t = 1.0;

  const KerrParams kp{base.gamma_h, base.gamma_v, base.gamma, base.t};
  const double n_t = base.n_h + base.n_v;
  double worst = 0.0;

  const PhaseOptimum lin = optimize_phase(EngineKind::linearized, base);
  const LinearizedResult lr = linearized_variances(base.n_h, base.n_v, 0.0, kp);
  worst = std::max(worst, std::abs(lin.v_min - lr.v_theta_min) / n_t);

  const PhaseOptimum ana = optimize_phase(EngineKind::analytic, base);
  const ExactMoments ex =
      exact_stokes_moments({std::sqrt(base.n_h), 0.0}, {std::sqrt(base.n_v), 0.0}, kp);
  worst = std::max(worst, std::abs(ana.v_min - exact_min_variance(ex).v_min) / n_t);
  return worst;
}

double check_detection_round_trip() {
  double worst = 0.0;
  for (double v : {0.05, 0.3019951720402016, 1.0, 2.5}) {
    for (double eta : {0.3, 0.81, 1.0}) {
      const double back = infer_source(apply_efficiency(v, eta), eta);
      worst = std::max(worst, std::abs(back - v) / v);
    }
  }
  return worst;
}

double check_db_round_trip() {
  double worst = 0.0;
  for (double v = 1e-6; v <= 1e3; v *= 10.0) {
    worst = std::max(worst, std::abs(from_db(to_db(v)) - v) / v);
  }
  worst = std::max(worst, std::abs(to_db(1.0)));
  return worst;
}

}  // namespace

SelfTestReport run_selftest(const std::string& inject_fault) {
  if (!inject_fault.empty() && inject_fault != "stokes_commutators") {
    throw RangeError("unknown fault '" + inject_fault +
                     "' (supported: stokes_commutators)");
  }

  SelfTestReport report;
  auto add = [&report](const char* name, double residual, double tol) {
    const bool pass = residual <= tol;
    report.checks.push_back({name, residual, tol, pass});
    report.all_pass = report.all_pass && pass;
  };

  add("fock_unitarity", check_fock_unitarity(), 1e-12);
  add("fock_number_conservation", check_number_conservation(), 0.0);
  add("fock_v0_v1_invariance", check_v0_v1_invariance(), 1e-10);
  add("fock_uncertainty_triplet", check_uncertainty_triplet(), 1e-8);
  add("stokes_hermiticity", check_hermiticity(), 1e-12);
  add("stokes_commutators", check_commutators(inject_fault == "stokes_commutators"), 1e-12);
  add("fock_label_swap", check_label_swap(), 1e-10);
  add("analytic_vs_fock_canonical", check_analytic_vs_fock_canonical(), 1e-8);
  add("analytic_vs_fock_random", check_analytic_vs_fock_random(), 1e-8);
  add("linearized_sum_rule", check_linearized_sum_rule(), 2e-15);
  add("linearized_vs_analytic", check_linearized_vs_analytic(), 0.05);
  add("phase_scan_ellipse_min", check_phase_scan_ellipse_min(), 1e-10);
  add("detection_round_trip", check_detection_round_trip(), 1e-12);
  add("db_round_trip", check_db_round_trip(), 1e-12);
  return report;
}

std::string format_selftest(const SelfTestReport& report) {
  std::string out;
  int passed = 0;
  for (const auto& c : report.checks) {
    char line[160];
    std::snprintf(line, sizeof(line), "%-28s residual=%-12.3e tol=%-9.0e %s\n", c.name.c_str(),
                  c.residual, c.tol, c.pass ? "PASS" : "FAIL");
    out += line;
    if (c.pass) ++passed;
  }
  out += "selftest: " + std::to_string(passed) + "/" + std::to_string(report.checks.size()) +
         " checks passed\n";
  return out;
}

}  // namespace kerrpol
