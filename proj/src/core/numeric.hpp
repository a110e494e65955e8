#pragma once

#include <cmath>
#include <complex>

namespace kerrpol {

// Compensated (Kahan) accumulator. The Fock moment sums run over a few
// thousand terms whose partial cancellation would otherwise eat into the
// 1e-8 cross-engine agreement budget.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

class KahanComplexSum {
 public:
  void add(std::complex<double> z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  std::complex<double> value() const { return {re_.value(), im_.value()}; }

 private:
  KahanSum re_;
  KahanSum im_;
};

// cos(x) - 1 without cancellation for small x.
inline double cos_minus_one(double x) {
  const double s = std::sin(0.5 * x);
  return -2.0 * s * s;
}

// sin(2x) - 2 sin(x) = 2 sin(x) (cos(x) - 1), conditioned for small x.
inline double sin2_minus_2sin(double x) {
  return 2.0 * std::sin(x) * cos_minus_one(x);
}

// (cos(2x) - 1) - 2 (cos(x) - 1) = -4 sin^2(x/2) cos(x), conditioned for small x.
inline double cos2m1_minus_2cosm1(double x) {
  const double s = std::sin(0.5 * x);
  return -4.0 * s * s * std::cos(x);
}

}  // namespace kerrpol
