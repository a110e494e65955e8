#include "core/linearized.hpp"

#include <cmath>
#include <limits>

namespace kerrpol {

namespace {

void check_inputs(double n_h, double n_v, const KerrParams& params) {
  if (!(n_h >= 0.0) || !(n_v >= 0.0)) {
    throw RangeError("mean photon numbers must be >= 0");
  }
  if (!(params.t >= 0.0)) {
    throw RangeError("interaction time must be >= 0");
  }
}

}  // namespace

double linearized_phase(double n_h, double n_v, double arg_w, const KerrParams& params) {
  check_inputs(n_h, n_v, params);
  return arg_w + n_h * std::sin((params.gamma_h - params.gamma) * params.t) -
         n_v * std::sin((params.gamma_v - params.gamma) * params.t);
}

LinearizedResult linearized_variances(double n_h, double n_v, double arg_w,
                                      const KerrParams& params) {
  check_inputs(n_h, n_v, params);
  LinearizedResult out;
  out.phi = linearized_phase(n_h, n_v, arg_w, params);

  const double dgamma_t = (params.gamma_h - params.gamma_v) * params.t;
  const double n_t = n_h + n_v;
  out.v_coh = n_t;
  out.b_amp = 2.0 * dgamma_t * n_h * n_v;

  const double s2phi = std::sin(2.0 * out.phi);
  out.v2 = n_t - out.b_amp * s2phi;
  out.v3 = n_t + out.b_amp * s2phi;
  out.cov23 = out.b_amp * std::cos(2.0 * out.phi);
  out.v_theta_min = n_t - std::abs(out.b_amp);

  const SqueezingFactor s = squeezing_factor(n_h, n_v, dgamma_t);
  out.s_exact = s.s_exact;
  out.s_approx = s.s_approx;
  out.s_exact_defined = s.s_exact_defined;

  out.beyond_validity = std::abs(dgamma_t) * std::max(n_h, n_v) > 0.3;
  return out;
}

double linearized_variance_theta(const LinearizedResult& r, double theta) {
  return r.v_coh - r.b_amp * std::sin(2.0 * r.phi - 2.0 * theta);
}

SqueezingFactor squeezing_factor(double n_h, double n_v, double dgamma_t) {
  if (!(n_h >= 0.0) || !(n_v >= 0.0)) {
    throw RangeError("mean photon numbers must be >= 0");
  }
  SqueezingFactor out;
  const double adt = std::abs(dgamma_t);
  out.s_approx = 1.0 - 2.0 * adt * n_v;
  if (n_h == n_v) {
    out.s_exact_defined = false;
    out.s_exact = std::numeric_limits<double>::quiet_NaN();
  } else {
    out.s_exact = (n_h + n_v - 2.0 * adt * n_h * n_v) / std::abs(n_h - n_v);
  }
  return out;
}

}  // namespace kerrpol
