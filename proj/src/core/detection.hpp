#pragma once

namespace kerrpol {

/**
 * Detection chain: finite quantum efficiency and logarithmic readout of
 * shot-noise-normalized variances.
 *
 * A variance v expressed in units of the coherent-state (shot-noise) level
 * degrades under detection efficiency eta as a beam-splitter admixture of
 * vacuum noise: v' = eta v + (1 - eta). The observable squeezing therefore
 * saturates at 1 - eta no matter how strong the source is.
 */

// Variance seen by a detector of efficiency eta in (0, 1]. v is relative to
// shot noise.
double apply_efficiency(double v_rel, double eta);

// Inverts apply_efficiency. Throws DomainError when the reading lies below
// the vacuum floor 1 - eta (no physical source produces it).
double infer_source(double v_detected, double eta);

// Decibel conversions of a shot-noise-relative variance. to_db throws
// DomainError for v <= 0.
double to_db(double v_rel);
double from_db(double db);

// A detected noise level in all the unit systems used by the sweep outputs.
struct NoiseReading {
  double v_abs = 0.0;      // absolute variance (photon-number units)
  double v_rel_coh = 0.0;  // relative to the shot-noise level n_h + n_v
  double v_rel_s1 = 0.0;   // relative to |<S1>| = |n_h - n_v|
  double db = 0.0;         // 10 log10 of v_rel_coh
  double eta = 1.0;
};

// Builds a NoiseReading from an absolute variance at detection efficiency
// eta. Throws DomainError when n_h == n_v (the |<S1>| normalization vanishes)
// or when the efficiency-degraded relative variance is not positive.
NoiseReading make_noise_reading(double v_abs, double n_h, double n_v, double eta);

}  // namespace kerrpol
