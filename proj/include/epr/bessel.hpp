#pragma once

namespace epr {

/// Modified Bessel functions of the second kind, orders 0 and 1.
/// Accurate to better than 1e-13 relative over the positive axis; values
/// below the double underflow threshold (x beyond ~740) flush to zero.
/// Throw std::domain_error for x <= 0.
double bessel_k0(double x);
double bessel_k1(double x);

} // namespace epr
