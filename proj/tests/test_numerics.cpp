#include <cmath>

#include <doctest.h>

#include "epr/bessel.hpp"
#include "epr/errors.hpp"
#include "epr/numerics.hpp"

using namespace epr;

TEST_CASE("integrate_1d: log singularity at zero") {
    QuadratureSpec spec;
    spec.hint = QuadratureSpec::Hint::log_at_zero;
    const double v = integrate_1d([](double k) { return -std::log(k); }, 0.0, 1.0, spec);
    CHECK(std::abs(v - 1.0) < 1e-12);
}

TEST_CASE("integrate_1d: algebraic tail on the half line") {
    const double v = integrate_1d(
        [](double k) {
            const double t = k * k + 1.0;
            return 2.0 * k / (t * t);
        },
        0.0, kInfinity, {});
    CHECK(std::abs(v - 1.0) < 1e-10);
}

TEST_CASE("integrate_1d: radial mass of K0") {
    QuadratureSpec spec;
    spec.hint = QuadratureSpec::Hint::log_at_zero;
    const double v = integrate_1d([](double k) { return k <= 0.0 ? 0.0 : k * bessel_k0(k); }, 0.0,
                                  kInfinity, spec);
    CHECK(std::abs(v - 1.0) < 1e-9);
}

TEST_CASE("integrate_1d: rejects reversed interval, handles empty one") {
    CHECK(integrate_1d([](double) { return 1.0; }, 2.0, 2.0, {}) == 0.0);
    CHECK_THROWS_AS(integrate_1d([](double) { return 1.0; }, 2.0, 1.0, {}),
                    std::invalid_argument);
}

TEST_CASE("integrate_1d: non-convergence raises") {
    QuadratureSpec spec;
    spec.max_depth = 3;
    spec.abs_tol = 1e-14;
    spec.rel_tol = 1e-14;
    // 1/sqrt(k) is integrable but needs far more than 3 bisections
    CHECK_THROWS_AS(
        integrate_1d([](double k) { return 1.0 / std::sqrt(k + 1e-300); }, 0.0, 1.0, spec),
        QuadratureError);
}

TEST_CASE("rk4_step: zero field and linear field") {
    auto zero = [](double, const std::vector<double>&, std::vector<double>& d) {
        d.assign(d.size(), 0.0);
    };
    CHECK(rk4_step({1.5, -2.0}, 0.0, 0.1, zero) == std::vector<double>{1.5, -2.0});

    auto linear = [](double, const std::vector<double>& y, std::vector<double>& d) { d[0] = y[0]; };
    const auto out = rk4_step({1.0}, 0.0, 0.1, linear);
    // fourth-order Taylor polynomial of exp(0.1)
    CHECK(out[0] == doctest::Approx(1.1051708333333333).epsilon(1e-15));
}

namespace {
// one revolution of the circular field (-y, x)
double rotation_error(double dt) {
    auto field = [](double, const std::vector<double>& y, std::vector<double>& d) {
        d[0] = -y[1];
        d[1] = y[0];
    };
    std::vector<double> y = {1.0, 0.0};
    const double t_end = 2.0 * 3.141592653589793238462643383279502884;
    const long long n = std::llround(t_end / dt);
    double t = 0.0;
    for (long long i = 0; i < n; ++i) {
        y = rk4_step(y, t, t_end / n, field);
        t += t_end / n;
    }
    return std::hypot(y[0] - 1.0, y[1]);
}
} // namespace

TEST_CASE("rk4_step: radius drift on one revolution is tiny") {
    auto field = [](double, const std::vector<double>& y, std::vector<double>& d) {
        d[0] = -y[1];
        d[1] = y[0];
    };
    std::vector<double> y = {1.0, 0.0};
    const double dt = 1e-3;
    const long long n = std::llround(2.0 * 3.141592653589793238462643383279502884 / dt);
    for (long long i = 0; i < n; ++i) y = rk4_step(y, i * dt, dt, field);
    CHECK(std::abs(std::hypot(y[0], y[1]) - 1.0) < 1e-10);
}

TEST_CASE("rk4_step: fourth-order convergence on the rotation field") {
    const double e1 = rotation_error(2.0 * 3.141592653589793238462643383279502884 / 100);
    const double e2 = rotation_error(2.0 * 3.141592653589793238462643383279502884 / 200);
    CHECK(e1 / e2 >= 15.0);
}

TEST_CASE("RadialTable: interpolation matches nodes exactly and is monotone") {
    RadialTable t;
    t.nodes = {0.0, 1.0, 2.0, 3.0, 5.0};
    t.values = {0.0, 0.5, 0.8, 0.9, 1.0};
    t.derivs = RadialTable::pchip_derivatives(t.nodes, t.values);
    RadialTable::monotone_limit(t.nodes, t.values, t.derivs);
    for (std::size_t i = 0; i < t.nodes.size(); ++i) CHECK(t.eval(t.nodes[i]) == t.values[i]);
    double prev = -1.0;
    for (double r = 0.0; r <= 5.0; r += 1e-3) {
        const double v = t.eval(r);
        CHECK(v >= prev - 1e-14);
        prev = v;
    }
}
