#include "core/detection.hpp"

#include <cmath>
#include <string>

#include "core/errors.hpp"

namespace kerrpol {

namespace {

void check_eta(double eta) {
  if (!(eta > 0.0) || !(eta <= 1.0)) {
    throw RangeError("detection efficiency must be in (0, 1], got " + std::to_string(eta));
  }
}

}  // namespace

double apply_efficiency(double v_rel, double eta) {
  check_eta(eta);
  return eta * v_rel + (1.0 - eta);
}

double infer_source(double v_detected, double eta) {
  check_eta(eta);
  const double floor = 1.0 - eta;
  if (v_detected < floor) {
    throw DomainError("detected variance " + std::to_string(v_detected) +
                      " lies below the vacuum floor " + std::to_string(floor) +
                      " for efficiency " + std::to_string(eta));
  }
  return (v_detected - floor) / eta;
}

double to_db(double v_rel) {
  if (!(v_rel > 0.0)) {
    throw DomainError("decibel readout requires a positive variance, got " +
                      std::to_string(v_rel));
  }
  return 10.0 * std::log10(v_rel);
}

double from_db(double db) { return std::pow(10.0, db / 10.0); }

NoiseReading make_noise_reading(double v_abs, double n_h, double n_v, double eta) {
  check_eta(eta);
  if (!(n_h >= 0.0) || !(n_v >= 0.0) || !(n_h + n_v > 0.0)) {
    throw RangeError("mean photon numbers must be >= 0 with a positive total");
  }
  if (n_h == n_v) {
    throw DomainError("the |<S1>| normalization vanishes for balanced modes");
  }
  NoiseReading out;
  out.eta = eta;
  out.v_abs = v_abs;
  const double shot = n_h + n_v;
  out.v_rel_coh = apply_efficiency(v_abs / shot, eta);
  out.v_rel_s1 = out.v_rel_coh * shot / std::abs(n_h - n_v);
  out.db = to_db(out.v_rel_coh);
  return out;
}

}  // namespace kerrpol
