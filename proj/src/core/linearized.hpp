#pragma once

#include <complex>

#include "core/fock.hpp"

namespace kerrpol {

/**
 * First-order (linearized) model of Kerr-induced polarization squeezing for a
 * bright two-mode coherent beam.
 *
 * The cross-coherence phase is carried exactly, while the variance ellipse is
 * expanded to first order in the self-Kerr anisotropy (gamma_h - gamma_v) t:
 *
 *   phi    = arg(conj(alpha_h) alpha_v)
 *            + n_h sin((gamma_h - gamma) t) - n_v sin((gamma_v - gamma) t)
 *   V2     = n_t - B sin(2 phi),   V3 = n_t + B sin(2 phi)
 *   cov23  = B cos(2 phi),         B  = 2 (gamma_h - gamma_v) t n_h n_v
 *   V(th)  = n_t - B sin(2 phi - 2 th)
 *   Vmin   = n_t - |B|
 *
 * with n_t = n_h + n_v the coherent-light (shot-noise) reference. The model
 * drops phase-diffusion terms of order n (gamma t)^2, so results carry a
 * beyond_validity flag once |gamma_h - gamma_v| t max(n_h, n_v) > 0.3.
 */
struct LinearizedResult {
  double phi = 0.0;          // rotated cross-coherence phase
  double v2 = 0.0;           // variance of S2
  double v3 = 0.0;           // variance of S3
  double cov23 = 0.0;        // (1/2)<{S2,S3}> - <S2><S3>
  double v_coh = 0.0;        // shot-noise reference n_h + n_v
  double v_theta_min = 0.0;  // minimum of V(theta) over the rotation angle
  double b_amp = 0.0;        // signed ellipse amplitude B above

  double s_exact = 0.0;      // Vmin / |<S1>|, the measured squeezing factor
  double s_approx = 0.0;     // its weak-seed limit 1 - 2 |dgamma| t n_v
  bool s_exact_defined = true;  // false when n_h == n_v (zero S1 mean)

  bool beyond_validity = false;
};

// Cross-coherence phase after evolution; exact (no linearization enters here).
double linearized_phase(double n_h, double n_v, double arg_w, const KerrParams& params);

LinearizedResult linearized_variances(double n_h, double n_v, double arg_w,
                                      const KerrParams& params);

// V(theta) from an already-computed result.
double linearized_variance_theta(const LinearizedResult& r, double theta);

// Squeezing factor alone, for callers that do not need the ellipse.
// dgamma_t is the signed product (gamma_h - gamma_v) * t.
struct SqueezingFactor {
  double s_exact = 0.0;
  double s_approx = 0.0;
  bool s_exact_defined = true;
};

SqueezingFactor squeezing_factor(double n_h, double n_v, double dgamma_t);

}  // namespace kerrpol
