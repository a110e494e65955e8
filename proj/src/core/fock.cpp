#include "core/fock.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "core/numeric.hpp"

namespace kerrpol {

namespace {

constexpr double kNormTol = 1e-12;

void check_cutoff(FockCutoff cutoff) {
  if (cutoff.n_max < 1) {
    throw RangeError("fock cutoff n_max must be >= 1, got " + std::to_string(cutoff.n_max));
  }
}

void check_tail_tol(double tail_tol) {
  if (!(tail_tol > 0.0) || !(tail_tol < 1.0)) {
    throw RangeError("tail_tol must be in (0, 1), got " + std::to_string(tail_tol));
  }
}

// Per-mode coherent amplitude vector v[n] = e^{-|a|^2/2} a^n / sqrt(n!) via the
// stable recurrence v[n] = v[n-1] * a / sqrt(n). Returns the retained weight
// sum |v[n]|^2 so the caller can gate the truncation tail.
double coherent_column(std::complex<double> alpha, int n_max, std::vector<std::complex<double>>& v) {
  v.assign(static_cast<std::size_t>(n_max) + 1, {0.0, 0.0});
  v[0] = std::exp(-0.5 * std::norm(alpha));
  KahanSum weight;
  weight.add(std::norm(v[0]));
  for (int n = 1; n <= n_max; ++n) {
    v[n] = v[n - 1] * alpha / std::sqrt(static_cast<double>(n));
    weight.add(std::norm(v[n]));
  }
  return weight.value();
}

}  // namespace

int auto_cutoff(double mean_photons, double tail_tol, int hard_cap) {
  if (!(mean_photons >= 0.0)) {
    throw RangeError("mean photon number must be >= 0");
  }
  check_tail_tol(tail_tol);
  if (hard_cap < 1) {
    throw RangeError("cutoff hard cap must be >= 1");
  }
  // Direct summation of the Poisson weights; p_0 = e^{-mean} underflows only
  // beyond mean ~ 745, far above any admissible cap. Two guard shells are
  // added past the minimal cutoff so the top two shells themselves stay below
  // tail_tol and quadratic moments do not trip the boundary warning.
  double p = std::exp(-mean_photons);
  KahanSum cum;
  cum.add(p);
  for (int n = 1; n <= hard_cap; ++n) {
    p *= mean_photons / n;
    cum.add(p);
    if (1.0 - cum.value() < tail_tol) {
      return std::min(std::max(n, 1) + 2, hard_cap);
    }
  }
  if (1.0 - cum.value() < tail_tol) {
    return hard_cap;
  }
  throw TruncationError("no cutoff up to " + std::to_string(hard_cap) +
                        " reaches tail tolerance " + std::to_string(tail_tol) +
                        " for mean photon number " + std::to_string(mean_photons));
}

int auto_cutoff(std::complex<double> alpha, double tail_tol, int hard_cap) {
  return auto_cutoff(std::norm(alpha), tail_tol, hard_cap);
}

TwoModeState TwoModeState::coherent(std::complex<double> alpha_h, std::complex<double> alpha_v,
                                    FockCutoff cutoff, double tail_tol) {
  check_cutoff(cutoff);
  check_tail_tol(tail_tol);

  TwoModeState state(cutoff.n_max, tail_tol);
  std::vector<std::complex<double>> vh, vv;
  const double wh = coherent_column(alpha_h, cutoff.n_max, vh);
  const double wv = coherent_column(alpha_v, cutoff.n_max, vv);
  const double tail_h = 1.0 - wh;
  const double tail_v = 1.0 - wv;
  if (tail_h > tail_tol || tail_v > tail_tol) {
    throw TruncationError("coherent state tail beyond n_max=" + std::to_string(cutoff.n_max) +
                          " exceeds tail_tol: tail_h=" + std::to_string(tail_h) +
                          ", tail_v=" + std::to_string(tail_v));
  }

  // Renormalize per mode, then take the product grid; the marginals are the
  // renormalized per-mode weights.
  const double inv_h = 1.0 / std::sqrt(wh);
  const double inv_v = 1.0 / std::sqrt(wv);
  const int d = cutoff.n_max + 1;
  state.grid_.resize(static_cast<std::size_t>(d) * d);
  state.marg_h_.resize(d);
  state.marg_v_.resize(d);
  for (int n = 0; n < d; ++n) {
    vh[n] *= inv_h;
    state.marg_h_[n] = std::norm(vh[n]);
  }
  for (int m = 0; m < d; ++m) {
    vv[m] *= inv_v;
    state.marg_v_[m] = std::norm(vv[m]);
  }
  for (int n = 0; n < d; ++n) {
    for (int m = 0; m < d; ++m) {
      state.grid_[state.idx(n, m)] = vh[n] * vv[m];
    }
  }
  return state;
}

TwoModeState TwoModeState::basis_state(int n, int m, FockCutoff cutoff) {
  check_cutoff(cutoff);
  if (n < 0 || m < 0 || n > cutoff.n_max || m > cutoff.n_max) {
    throw RangeError("basis state indices out of range for cutoff " + std::to_string(cutoff.n_max));
  }
  TwoModeState state(cutoff.n_max, 1e-16);
  const int d = cutoff.n_max + 1;
  state.grid_.assign(static_cast<std::size_t>(d) * d, {0.0, 0.0});
  state.marg_h_.assign(d, 0.0);
  state.marg_v_.assign(d, 0.0);
  state.grid_[state.idx(n, m)] = 1.0;
  state.marg_h_[n] = 1.0;
  state.marg_v_[m] = 1.0;
  return state;
}

TwoModeState TwoModeState::from_amplitudes(std::vector<std::complex<double>> grid, FockCutoff cutoff,
                                           double tail_tol) {
  check_cutoff(cutoff);
  check_tail_tol(tail_tol);
  const int d = cutoff.n_max + 1;
  if (grid.size() != static_cast<std::size_t>(d) * d) {
    throw RangeError("amplitude grid size does not match cutoff");
  }
  KahanSum total;
  for (const auto& z : grid) total.add(std::norm(z));
  if (!(total.value() > 0.0)) {
    throw DomainError("amplitude grid has zero norm");
  }
  const double inv = 1.0 / std::sqrt(total.value());
  for (auto& z : grid) z *= inv;

  TwoModeState state(cutoff.n_max, tail_tol);
  state.grid_ = std::move(grid);
  state.marg_h_.assign(d, 0.0);
  state.marg_v_.assign(d, 0.0);
  for (int n = 0; n < d; ++n) {
    KahanSum row;
    for (int m = 0; m < d; ++m) row.add(std::norm(state.grid_[state.idx(n, m)]));
    state.marg_h_[n] = row.value();
  }
  for (int m = 0; m < d; ++m) {
    KahanSum col;
    for (int n = 0; n < d; ++n) col.add(std::norm(state.grid_[state.idx(n, m)]));
    state.marg_v_[m] = col.value();
  }
  return state;
}

double TwoModeState::norm_sq() const {
  KahanSum s;
  for (const auto& z : grid_) s.add(std::norm(z));
  return s.value();
}

double TwoModeState::boundary_mass() const {
  const int d = dim();
  if (d < 3) {
    return 1.0;
  }
  KahanSum s;
  for (int n = 0; n < d; ++n) {
    for (int m = 0; m < d; ++m) {
      if (n >= d - 2 || m >= d - 2) s.add(std::norm(grid_[idx(n, m)]));
    }
  }
  return s.value();
}

TwoModeState kerr_evolve(const TwoModeState& state, const KerrParams& params) {
  if (!(params.t >= 0.0)) {
    throw RangeError("interaction time must be >= 0");
  }
  TwoModeState out(state.n_max_, state.tail_tol_);
  out.marg_h_ = state.marg_h_;  // photon numbers conserved exactly: carry through
  out.marg_v_ = state.marg_v_;
  const int d = state.dim();
  out.grid_.resize(state.grid_.size());
  for (int n = 0; n < d; ++n) {
    const double nn1 = static_cast<double>(n) * (n - 1);
    for (int m = 0; m < d; ++m) {
      const double mm1 = static_cast<double>(m) * (m - 1);
      const double phase = -0.5 * params.t *
                           (params.gamma_h * nn1 + params.gamma_v * mm1 +
                            2.0 * params.gamma * static_cast<double>(n) * m);
      out.grid_[out.idx(n, m)] = state.grid_[state.idx(n, m)] * std::polar(1.0, phase);
    }
  }
  const double norm = out.norm_sq();
  if (std::abs(norm - 1.0) > kNormTol) {
    throw InvariantError("norm drifted across evolution: " + std::to_string(norm));
  }
  return out;
}

namespace {

// (S2 psi)[n][m] = sqrt(n(m+1)) psi[n-1][m+1] + sqrt((n+1)m) psi[n+1][m-1]
std::vector<std::complex<double>> apply_s2(const TwoModeState& st) {
  const int d = st.dim();
  std::vector<std::complex<double>> out(static_cast<std::size_t>(d) * d, {0.0, 0.0});
  for (int n = 0; n < d; ++n) {
    for (int m = 0; m < d; ++m) {
      std::complex<double> acc{0.0, 0.0};
      if (n >= 1 && m + 1 < d) {
        acc += std::sqrt(static_cast<double>(n) * (m + 1)) * st.amp(n - 1, m + 1);
      }
      if (n + 1 < d && m >= 1) {
        acc += std::sqrt(static_cast<double>(n + 1) * m) * st.amp(n + 1, m - 1);
      }
      out[st.idx(n, m)] = acc;
    }
  }
  return out;
}

// (S3 psi)[n][m] = i [ sqrt((n+1)m) psi[n+1][m-1] - sqrt(n(m+1)) psi[n-1][m+1] ]
std::vector<std::complex<double>> apply_s3(const TwoModeState& st) {
  const int d = st.dim();
  std::vector<std::complex<double>> out(static_cast<std::size_t>(d) * d, {0.0, 0.0});
  const std::complex<double> i_unit{0.0, 1.0};
  for (int n = 0; n < d; ++n) {
    for (int m = 0; m < d; ++m) {
      std::complex<double> acc{0.0, 0.0};
      if (n + 1 < d && m >= 1) {
        acc += std::sqrt(static_cast<double>(n + 1) * m) * st.amp(n + 1, m - 1);
      }
      if (n >= 1 && m + 1 < d) {
        acc -= std::sqrt(static_cast<double>(n) * (m + 1)) * st.amp(n - 1, m + 1);
      }
      out[st.idx(n, m)] = i_unit * acc;
    }
  }
  return out;
}

std::complex<double> inner(std::span<const std::complex<double>> a,
                           std::span<const std::complex<double>> b) {
  KahanComplexSum s;
  for (std::size_t i = 0; i < a.size(); ++i) s.add(std::conj(a[i]) * b[i]);
  return s.value();
}

}  // namespace

StokesMoments stokes_moments(const TwoModeState& state) {
  const int d = state.dim();
  StokesMoments out;

  // Diagonal observables from the joint distribution.
  KahanSum en, em, enn, emm, enm;
  KahanSum es0sq, es1sq;
  for (int n = 0; n < d; ++n) {
    for (int m = 0; m < d; ++m) {
      const double p = std::norm(state.amp(n, m));
      if (p == 0.0) continue;
      const double dn = n, dm = m;
      en.add(dn * p);
      em.add(dm * p);
      enn.add(dn * dn * p);
      emm.add(dm * dm * p);
      enm.add(dn * dm * p);
      es0sq.add((dn + dm) * (dn + dm) * p);
      es1sq.add((dn - dm) * (dn - dm) * p);
    }
  }
  out.mean[0] = en.value() + em.value();
  out.mean[1] = en.value() - em.value();
  out.second[0] = es0sq.value();
  out.second[1] = es1sq.value();

  // Rotating-plane observables by direct sparse application.
  const auto s2psi = apply_s2(state);
  const auto s3psi = apply_s3(state);
  const auto amps = state.amplitudes();
  const std::complex<double> m2 = inner(amps, s2psi);
  const std::complex<double> m3 = inner(amps, s3psi);
  out.mean[2] = m2.real();
  out.mean[3] = m3.real();
  out.second[2] = inner(s2psi, s2psi).real();
  out.second[3] = inner(s3psi, s3psi).real();
  out.cov23 = inner(s2psi, s3psi).real() - out.mean[2] * out.mean[3];

  // <a_h^dag a_v> = sum conj(c[n+1][m-1]) sqrt((n+1)m) c[n][m]
  KahanComplexSum cross;
  for (int n = 0; n + 1 < d; ++n) {
    for (int m = 1; m < d; ++m) {
      cross.add(std::conj(state.amp(n + 1, m - 1)) *
                std::sqrt(static_cast<double>(n + 1) * m) * state.amp(n, m));
    }
  }
  out.cross = cross.value();

  for (int i = 0; i < 4; ++i) {
    out.variance[i] = out.second[i] - out.mean[i] * out.mean[i];
  }

  out.boundary_mass = state.boundary_mass();
  out.boundary_warning = out.boundary_mass > state.tail_tol();
  return out;
}

ThetaMoment stokes_theta(const TwoModeState& state, double theta) {
  const auto s2psi = apply_s2(state);
  const auto s3psi = apply_s3(state);
  const double c = std::cos(theta), s = std::sin(theta);
  std::vector<std::complex<double>> rot(s2psi.size());
  for (std::size_t i = 0; i < rot.size(); ++i) rot[i] = c * s2psi[i] + s * s3psi[i];

  ThetaMoment out;
  const auto amps = state.amplitudes();
  out.mean = inner(amps, rot).real();
  out.second = inner(rot, rot).real();
  out.variance = out.second - out.mean * out.mean;
  out.boundary_warning = state.boundary_mass() > state.tail_tol();
  return out;
}

std::vector<std::complex<double>> SparseMatrix::apply(
    std::span<const std::complex<double>> v) const {
  std::vector<std::complex<double>> out(static_cast<std::size_t>(dim), {0.0, 0.0});
  for (const auto& e : entries) {
    out[e.row] += e.val * v[e.col];
  }
  return out;
}

bool SparseMatrix::is_hermitian(double tol) const {
  // Work on a sorted copy so callers need not maintain any entry ordering.
  std::vector<Entry> sorted = entries;
  std::sort(sorted.begin(), sorted.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  for (const auto& e : sorted) {
    const auto it = std::lower_bound(
        sorted.begin(), sorted.end(), std::pair<int, int>{e.col, e.row},
        [](const Entry& a, const std::pair<int, int>& key) {
          return a.row != key.first ? a.row < key.first : a.col < key.second;
        });
    if (it == sorted.end() || it->row != e.col || it->col != e.row) {
      if (std::abs(e.val) > tol) return false;
      continue;
    }
    if (std::abs(it->val - std::conj(e.val)) > tol) return false;
  }
  return true;
}

StokesMatrices build_stokes_matrices(FockCutoff cutoff) {
  check_cutoff(cutoff);
  if (cutoff.n_max < 2) {
    throw RangeError("stokes matrices need n_max >= 2, got " +
                     std::to_string(cutoff.n_max));
  }
  const int d = cutoff.n_max + 1;
  const int dim = d * d;
  StokesMatrices m;
  m.s0.dim = m.s1.dim = m.s2.dim = m.s3.dim = dim;
  auto id = [d](int n, int mm) { return n * d + mm; };

  for (int n = 0; n < d; ++n) {
    for (int mm = 0; mm < d; ++mm) {
      const int col = id(n, mm);
      m.s0.entries.push_back({col, col, {static_cast<double>(n + mm), 0.0}});
      m.s1.entries.push_back({col, col, {static_cast<double>(n - mm), 0.0}});
      if (n + 1 < d && mm >= 1) {
        // a_h^dag a_v |n,m> = sqrt((n+1)m) |n+1,m-1>
        const double w = std::sqrt(static_cast<double>(n + 1) * mm);
        m.s2.entries.push_back({id(n + 1, mm - 1), col, {w, 0.0}});
        m.s3.entries.push_back({id(n + 1, mm - 1), col, {0.0, -w}});
      }
      if (n >= 1 && mm + 1 < d) {
        // a_v^dag a_h |n,m> = sqrt(n(m+1)) |n-1,m+1>
        const double w = std::sqrt(static_cast<double>(n) * (mm + 1));
        m.s2.entries.push_back({id(n - 1, mm + 1), col, {w, 0.0}});
        m.s3.entries.push_back({id(n - 1, mm + 1), col, {0.0, w}});
      }
    }
  }
  auto sort_entries = [](SparseMatrix& sm) {
    std::sort(sm.entries.begin(), sm.entries.end(), [](const auto& a, const auto& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
  };
  sort_entries(m.s0);
  sort_entries(m.s1);
  sort_entries(m.s2);
  sort_entries(m.s3);
  return m;
}

}  // namespace kerrpol
