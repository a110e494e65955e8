#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "core/errors.hpp"

namespace kerrpol {

/**
 * Truncated two-mode Fock-basis engine.
 *
 * A state lives on the amplitude grid c[n][m], 0 <= n,m <= n_max, where n and
 * m count photons in the horizontal and vertical modes. The Kerr interaction
 *
 *   H = (hbar/2) * (gamma_h a_h^dag^2 a_h^2 + gamma_v a_v^dag^2 a_v^2
 *                   + 2 gamma n_h n_v)
 *
 * is diagonal in this basis (a^dag^2 a^2 = n(n-1), normal ordering), so
 * evolution multiplies each amplitude by a unit phase and every function of
 * the photon numbers is conserved exactly.
 *
 * Maintained invariants:
 *  - sum |c|^2 = 1 within 1e-12 after construction and after every evolution;
 *  - the photon-number marginals are bitwise-identical across kerr_evolve.
 *    They are computed once at construction and carried through evolution
 *    unchanged; recomputing them after the phase multiply would wobble at
 *    1 ulp while the conservation itself is exact;
 *  - construction fails with TruncationError when either mode's Poisson
 *    weight beyond n_max exceeds tail_tol;
 *  - moment evaluation flags BoundaryWarning when more than tail_tol of the
 *    probability mass sits in the top two per-mode shells, where truncated
 *    ladder products are corrupted.
 */

struct FockCutoff {
  int n_max;  // highest retained photon number per mode, >= 1
};

struct KerrParams {
  double gamma_h = 0.0;  // self-Kerr rate, horizontal mode
  double gamma_v = 0.0;  // self-Kerr rate, vertical mode
  double gamma = 0.0;    // cross-Kerr rate
  double t = 1.0;        // interaction time, >= 0
};

// Smallest cutoff whose Poisson(mean) tail is below tail_tol, plus two guard
// shells (clamped to hard_cap) so the top shells of an auto-sized state stay
// quiet under the boundary-mass warning. Throws TruncationError when no
// cutoff up to hard_cap suffices.
int auto_cutoff(double mean_photons, double tail_tol, int hard_cap = 255);
int auto_cutoff(std::complex<double> alpha, double tail_tol, int hard_cap = 255);

class TwoModeState {
 public:
  // Truncated, renormalized two-mode coherent state |alpha_h, alpha_v>.
  static TwoModeState coherent(std::complex<double> alpha_h, std::complex<double> alpha_v,
                               FockCutoff cutoff, double tail_tol);

  // Basis state |n, m>. Used by tests and the selftest harness.
  static TwoModeState basis_state(int n, int m, FockCutoff cutoff);

  // Arbitrary normalized amplitude grid, row-major with index n*(n_max+1)+m.
  // The grid is renormalized; marginals are computed here.
  static TwoModeState from_amplitudes(std::vector<std::complex<double>> grid, FockCutoff cutoff,
                                      double tail_tol);

  int n_max() const { return n_max_; }
  int dim() const { return n_max_ + 1; }
  double tail_tol() const { return tail_tol_; }

  std::complex<double> amp(int n, int m) const { return grid_[idx(n, m)]; }
  std::span<const std::complex<double>> amplitudes() const { return grid_; }

  // Photon-number marginals P(n), P(m); exact across Kerr evolution.
  std::span<const double> marginal_h() const { return marg_h_; }
  std::span<const double> marginal_v() const { return marg_v_; }

  double norm_sq() const;

  // Probability mass in the top two per-mode shells (n >= n_max-1 or
  // m >= n_max-1), the region where truncated quadratic observables are
  // unreliable.
  double boundary_mass() const;

  std::size_t idx(int n, int m) const { return static_cast<std::size_t>(n) * dim() + m; }

 private:
  TwoModeState(int n_max, double tail_tol) : n_max_(n_max), tail_tol_(tail_tol) {}

  int n_max_;
  double tail_tol_;
  std::vector<std::complex<double>> grid_;
  std::vector<double> marg_h_;
  std::vector<double> marg_v_;

  friend TwoModeState kerr_evolve(const TwoModeState&, const KerrParams&);
};

// Applies the diagonal Kerr propagator: c[n][m] *= exp(-i (t/2) (gamma_h n(n-1)
// + gamma_v m(m-1) + 2 gamma n m)). Pure; returns the evolved state.
TwoModeState kerr_evolve(const TwoModeState& state, const KerrParams& params);

// Means, second moments and variances of the four Stokes observables
//   S0 = n_h + n_v          S1 = n_h - n_v
//   S2 = a_h^dag a_v + a_v^dag a_h
//   S3 = i (a_v^dag a_h - a_h^dag a_v)
// evaluated by direct sparse application of the ladder definitions to the
// amplitude grid. cross = <a_h^dag a_v>; cov23 is the symmetrized covariance
// (1/2)<S2 S3 + S3 S2> - <S2><S3>, needed for rotated-quadrature minima.
struct StokesMoments {
  std::array<double, 4> mean{};
  std::array<double, 4> second{};
  std::array<double, 4> variance{};
  std::complex<double> cross{};
  double cov23 = 0.0;
  bool boundary_warning = false;
  double boundary_mass = 0.0;
};

StokesMoments stokes_moments(const TwoModeState& state);

// Moments of the rotated observable S_theta = S2 cos(theta) + S3 sin(theta),
// computed by applying S_theta to the state directly (covariance included by
// construction, not recombined from V2 and V3).
struct ThetaMoment {
  double mean = 0.0;
  double second = 0.0;
  double variance = 0.0;
  bool boundary_warning = false;
};

ThetaMoment stokes_theta(const TwoModeState& state, double theta);

// Explicit sparse matrices of S0..S3 on the truncated two-mode grid, basis
// index n*(n_max+1)+m. Entries are sorted by (row, col). Used by the algebra
// selftests; apply() is enough for commutator checks without dense products.
struct SparseMatrix {
  struct Entry {
    int row;
    int col;
    std::complex<double> val;
  };
  int dim = 0;
  std::vector<Entry> entries;

  std::vector<std::complex<double>> apply(std::span<const std::complex<double>> v) const;
  bool is_hermitian(double tol) const;
};

struct StokesMatrices {
  SparseMatrix s0, s1, s2, s3;
};

StokesMatrices build_stokes_matrices(FockCutoff cutoff);

}  // namespace kerrpol
