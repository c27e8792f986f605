#include "stosa/special.hpp"

#include <cmath>
#include <numbers>

namespace stosa {

double erfcx(double x) {
  if (std::isnan(x)) return x;
  if (x < 0.0) {
    // erfcx(-x) = 2 exp(x^2) - erfcx(x); overflows to +inf for x << -26.
    return 2.0 * std::exp(x * x) - erfcx(-x);
  }
  if (x <= 12.0) {
    // exp(x^2) stays below ~3.5e62 here and erfc keeps full relative
    // precision, so the direct product is accurate to ~x^2 * eps.
    return std::exp(x * x) * std::erfc(x);
  }
  // Laplace continued fraction, evaluated backward. For x > 12 forty levels
  // are far more than needed for double precision.
  double cf = 0.0;
  for (int k = 40; k >= 1; --k) {
    cf = (0.5 * k) / (x + cf);
  }
  return std::numbers::inv_sqrtpi / (x + cf);
}

}  // namespace stosa
