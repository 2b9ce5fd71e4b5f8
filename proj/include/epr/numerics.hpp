#pragma once

#include <functional>
#include <limits>
#include <vector>

namespace epr {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Controls for the adaptive 1D quadrature.
struct QuadratureSpec {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_depth = 60;
    enum class Hint { none, log_at_zero } hint = Hint::none;
};

/// Adaptive Gauss-Kronrod integration of f over (a, b), b may be +infinity.
///
/// An infinite upper limit is mapped to (0,1) by k = a + s/(1-s).  With
/// hint == log_at_zero and a == 0 the left end is handled by the substitution
/// k = exp(u), which turns integrable logarithmic singularities into smooth
/// exponentially decaying integrands.  Throws QuadratureError when the
/// requested tolerance cannot be met within max_depth bisections.
double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    const QuadratureSpec& spec = {});

/// One classical fourth-order Runge-Kutta step for dy/dt = f(t, y).
/// f writes the derivative of y into its third argument.
std::vector<double> rk4_step(
    const std::vector<double>& state, double t, double dt,
    const std::function<void(double, const std::vector<double>&, std::vector<double>&)>& f);

/// Tabulated radial function with monotonicity-limited cubic Hermite
/// interpolation.  Nodes must be strictly increasing; eval reproduces the
/// node values exactly.
struct RadialTable {
    std::vector<double> nodes;
    std::vector<double> values;
    std::vector<double> derivs;

    double eval(double r) const;
    bool empty() const { return nodes.empty(); }

    // PCHIP-style derivative estimates from data alone (used when no exact
    // derivative is available, e.g. profiles loaded from CSV).
    static std::vector<double> pchip_derivatives(const std::vector<double>& x,
                                                 const std::vector<double>& v);

    // Fritsch-Carlson limiter: adjusts derivs in place so the interpolant is
    // monotone wherever the data is.
    static void monotone_limit(const std::vector<double>& x, const std::vector<double>& v,
                               std::vector<double>& d);
};

} // namespace epr
