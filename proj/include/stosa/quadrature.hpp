#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>

namespace stosa {

/// Composite trapezoid rule on `nodes` uniformly spaced points over [a,b].
/// Kahan-compensated so that node counts around 1e6 do not lose digits to
/// accumulation. Requires a < b and nodes >= 2.
template <class F>
double trapezoid(F&& fn, double a, double b, std::int64_t nodes) {
  if (!(a < b)) throw std::invalid_argument("trapezoid: requires a < b");
  if (nodes < 2) throw std::invalid_argument("trapezoid: requires nodes >= 2");
  const double h = (b - a) / static_cast<double>(nodes - 1);
  double sum = 0.5 * (fn(a) + fn(b));
  double comp = 0.0;
  for (std::int64_t i = 1; i < nodes - 1; ++i) {
    const double x = a + h * static_cast<double>(i);
    const double y = fn(x) - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return h * sum;
}

}  // namespace stosa
