// Complex error function and Faddeeva function.
//
// Two evaluation routes cover the plane:
//  * Maclaurin series of erf. Rounding error grows like |z| exp(2 Re(z)^2)
//    relative to the result, so it is used only near the imaginary axis.
//  * Laplace continued fraction for w(z), Im z > 0, evaluated backwards with
//    doubling depth until two depths agree to 1e-15.
// erf(z) for Re z > 2 is obtained as 1 - exp(-z^2) w(iz).

#include "qcorr/detector.hpp"

#include <cmath>
#include <numbers>

namespace qcorr {

namespace {

constexpr double kTwoOverSqrtPi = 2.0 * std::numbers::inv_sqrtpi;

// |Re z| bound for the direct Maclaurin route of erf.
constexpr double kSeriesReal = 2.0;
// Region of w(z) evaluated through the series of erf(-iz).
constexpr double kWSeriesReal = 6.3;
constexpr double kWSeriesImag = 1.5;

Complex erf_series(Complex z) {
  const Complex z2 = z * z;
  const double peak = std::abs(z2);
  Complex term = z;
  Complex sum = z;
  for (int n = 1; n < 4000; ++n) {
    term *= -z2 / static_cast<double>(n);
    const Complex add = term / static_cast<double>(2 * n + 1);
    sum += add;
    if (n > peak && std::abs(add) <= 1e-17 * std::abs(sum)) break;
  }
  return kTwoOverSqrtPi * sum;
}

Complex w_continued_fraction(Complex z) {
  Complex previous;
  for (int depth = 8; depth <= (1 << 20); depth *= 2) {
    Complex t = 0.0;
    for (int n = depth; n >= 1; --n) t = (0.5 * n) / (z - t);
    const Complex value = Complex(0.0, std::numbers::inv_sqrtpi) / (z - t);
    if (depth > 8 && std::abs(value - previous) <= 1e-15 * std::abs(value)) return value;
    previous = value;
  }
  return previous;
}

}  // namespace

Complex faddeeva_w(Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw DomainError("faddeeva_w: non-finite argument");
  if (z.imag() < 0.0) return 2.0 * std::exp(-z * z) - faddeeva_w(-z);
  if (std::abs(z.real()) <= kWSeriesReal && z.imag() < kWSeriesImag)
    return std::exp(-z * z) * (1.0 - erf_series(Complex(z.imag(), -z.real())));
  return w_continued_fraction(z);
}

Complex erf_complex(Complex z) {
  if (!(std::abs(z) <= kErfDomain)) throw DomainError("erf_complex: |z| exceeds 12");
  if (std::abs(z.real()) <= kSeriesReal) return erf_series(z);
  if (z.real() < 0.0) return -erf_complex(-z);
  return 1.0 - std::exp(-z * z) * faddeeva_w(Complex(-z.imag(), z.real()));
}

}  // namespace qcorr
