#pragma once

namespace stosa {

/// Scaled complementary error function exp(x^2) * erfc(x).
///
/// Relative accuracy better than 1e-13 over the full real line; evaluates
/// without overflow for arbitrarily large x, which std::exp(x*x) *
/// std::erfc(x) cannot do past x ~ 26.
double erfcx(double x);

}  // namespace stosa
