// Test-only oracles, independent of the implementation paths they check.
#pragma once

#include <cmath>

#include "epr/numerics.hpp"

namespace oracles {

// Modified Bessel functions from their integral representations,
//   K0(x) = int_0^inf exp(-x cosh t) dt,
//   K1(x) = int_0^inf exp(-x cosh t) cosh t dt,
// evaluated in exponentially scaled form so the quadrature stays
// well-conditioned at large x.
inline double bessel_k0(double x) {
    epr::QuadratureSpec spec;
    spec.abs_tol = 1e-16;
    spec.rel_tol = 1e-14;
    const double t_max = std::acosh(50.0 / x + 1.0) + 1.0;
    const double scaled = epr::integrate_1d(
        [x](double t) { return std::exp(-x * (std::cosh(t) - 1.0)); }, 0.0, t_max, spec);
    return scaled * std::exp(-x);
}

inline double bessel_k1(double x) {
    epr::QuadratureSpec spec;
    spec.abs_tol = 1e-16;
    spec.rel_tol = 1e-14;
    const double t_max = std::acosh(50.0 / x + 1.0) + 1.0;
    const double scaled = epr::integrate_1d(
        [x](double t) { return std::exp(-x * (std::cosh(t) - 1.0)) * std::cosh(t); }, 0.0, t_max,
        spec);
    return scaled * std::exp(-x);
}

// closed forms of the built-in regularizations
inline double blob_shape(double r) { return r * r / (r * r + 1.0); }
inline double blob_stream_unit(double s) {
    return -std::log(s * s + 1.0) / (4.0 * 3.141592653589793238462643383279502884);
}

} // namespace oracles
