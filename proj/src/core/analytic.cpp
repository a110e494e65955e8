#include "core/analytic.hpp"

#include <cmath>

#include "core/numeric.hpp"

namespace kerrpol {

ExactMoments exact_stokes_moments(std::complex<double> alpha_h, std::complex<double> alpha_v,
                                  const KerrParams& params) {
  if (!(params.t >= 0.0)) {
    throw RangeError("interaction time must be >= 0");
  }

  ExactMoments out;
  const double lam_h = std::norm(alpha_h);
  const double lam_v = std::norm(alpha_v);
  out.lambda_h = lam_h;
  out.lambda_v = lam_v;
  const double n_t = lam_h + lam_v;

  const std::complex<double> w = std::conj(alpha_h) * alpha_v;
  const double th = params.t * (params.gamma_h - params.gamma);
  const double tv = params.t * (params.gamma - params.gamma_v);

  const double le = lam_h * cos_minus_one(th) + lam_v * cos_minus_one(tv);
  const double psi_e = std::arg(w) + lam_h * std::sin(th) + lam_v * std::sin(tv);
  const double ld = lam_h * cos_minus_one(2.0 * th) + lam_v * cos_minus_one(2.0 * tv);
  const double dpsi = params.t * (params.gamma_h - params.gamma_v) +
                      lam_h * sin2_minus_2sin(th) + lam_v * sin2_minus_2sin(tv);

  const double me2 = std::exp(2.0 * le);  // |E|^2 / (lam_h lam_v)
  const double md = std::exp(ld);         // |D|   / (lam_h lam_v)
  const double q = -std::expm1(2.0 * le);

  // dM = e^{L_D} - e^{2 L_E}. When the exponents nearly coincide, route the
  // subtraction through expm1 of their conditioned difference.
  const double dle = lam_h * cos2m1_minus_2cosm1(th) + lam_v * cos2m1_minus_2cosm1(tv);
  const double dm = std::abs(dle) < 0.5 ? me2 * std::expm1(dle) : md - me2;

  const double half = 0.5 * dpsi;
  const double p = -2.0 * md * std::sin(2.0 * psi_e + half) * std::sin(half) +
                   dm * std::cos(2.0 * psi_e);
  const double pp = 2.0 * md * std::cos(2.0 * psi_e + half) * std::sin(half) +
                    dm * std::sin(2.0 * psi_e);
  out.q = q;
  out.p = p;
  out.p_prime = pp;

  const double mag_e = std::abs(w) * std::exp(le);
  out.cross = std::polar(mag_e, psi_e);

  out.mean[0] = n_t;
  out.mean[1] = lam_h - lam_v;
  out.mean[2] = 2.0 * out.cross.real();
  out.mean[3] = 2.0 * out.cross.imag();

  const double two_ll = 2.0 * lam_h * lam_v;
  out.variance[0] = n_t;
  out.variance[1] = n_t;
  out.variance[2] = n_t + two_ll * (p + q);
  out.variance[3] = n_t + two_ll * (-p + q);
  out.cov23 = two_ll * pp;
  return out;
}

double exact_variance_theta(const ExactMoments& m, double theta) {
  const double n_t = m.lambda_h + m.lambda_v;
  return n_t + 2.0 * m.lambda_h * m.lambda_v *
                   (m.q + m.p * std::cos(2.0 * theta) + m.p_prime * std::sin(2.0 * theta));
}

MinVariance exact_min_variance(const ExactMoments& m) {
  MinVariance out;
  const double n_t = m.lambda_h + m.lambda_v;
  const double two_ll = 2.0 * m.lambda_h * m.lambda_v;
  const double r = std::hypot(m.p, m.p_prime);
  out.v_min = n_t + two_ll * (m.q - r);
  if (two_ll * r <= 1e-12 * std::max(1.0, n_t)) {
    out.degenerate = true;
    out.theta_opt = 0.0;
  } else {
    out.theta_opt = 0.5 * std::atan2(-m.p_prime, -m.p);
  }
  return out;
}

}  // namespace kerrpol
