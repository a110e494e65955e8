#pragma once

#include <array>
#include <complex>

#include "core/fock.hpp"

namespace kerrpol {

/**
 * Closed-form Stokes moments of a two-mode coherent state after Kerr
 * evolution, with no basis truncation.
 *
 * The Heisenberg solutions a_h(t) = exp(-i t (gamma_h n_h + gamma n_v)) a_h
 * and a_v(t) = exp(-i t (gamma_v n_v + gamma n_h)) a_v reduce every needed
 * expectation to coherent-state characteristic values
 * <exp(i theta n)> = exp(lambda (e^{i theta} - 1)), giving
 *
 *   E = <a_h^dag a_v> = w exp(L_E + i psi_E),        w = conj(alpha_h) alpha_v
 *   D = <a_h^dag^2 a_v^2> = w^2 exp(L_D + i psi_D)
 *
 * with L_E = lam_h (cos th - 1) + lam_v (cos tv - 1), th = t (gamma_h - gamma),
 * tv = t (gamma - gamma_v), and psi_D - 2 psi_E = t (gamma_h - gamma_v)
 * + lam_h (sin 2th - 2 sin th) + lam_v (sin 2tv - 2 sin tv).
 *
 * All variance brackets are evaluated in cancellation-free form: the
 * V2/V3/cov23 deviations from the photon-number floor n_h + n_v are products
 * of 2 lam_h lam_v with the brackets
 *
 *   Q  = 1 - e^{2 L_E}                           (phase-diffusion floor lift)
 *   P  = e^{L_D} cos psi_D - e^{2 L_E} cos 2psi_E
 *   P' = e^{L_D} sin psi_D - e^{2 L_E} sin 2psi_E
 *
 * combined through angle-difference identities and expm1 so that the
 * near-coherent regime (all arguments ~ lambda * (gamma t)^2 small) keeps
 * full relative accuracy even at lambda ~ 1e10.
 */
struct ExactMoments {
  std::array<double, 4> mean{};      // <S0>, <S1>, <S2>, <S3>
  std::array<double, 4> variance{};  // V0, V1 (both n_h+n_v exactly), V2, V3
  double cov23 = 0.0;                // (1/2)<{S2,S3}> - <S2><S3>
  std::complex<double> cross{};      // E = <a_h^dag a_v>

  // Inputs and brackets retained for rotated-quadrature evaluation.
  double lambda_h = 0.0;  // |alpha_h|^2
  double lambda_v = 0.0;  // |alpha_v|^2
  double q = 0.0;
  double p = 0.0;
  double p_prime = 0.0;
};

ExactMoments exact_stokes_moments(std::complex<double> alpha_h, std::complex<double> alpha_v,
                                  const KerrParams& params);

// Variance of S_theta = S2 cos(theta) + S3 sin(theta):
//   V(theta) = n_t + 2 lam_h lam_v (Q + P cos 2theta + P' sin 2theta).
double exact_variance_theta(const ExactMoments& m, double theta);

// Minimum of V(theta) over the rotation angle and its location.
struct MinVariance {
  double v_min = 0.0;
  double theta_opt = 0.0;
  // True when the (P, P') amplitude is negligible against the variance scale:
  // the ellipse is a circle and theta_opt is reported as 0 by convention.
  bool degenerate = false;
};

MinVariance exact_min_variance(const ExactMoments& m);

}  // namespace kerrpol
