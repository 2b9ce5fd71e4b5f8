#include "epr/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "epr/errors.hpp"

namespace epr {

namespace {

// 15-point Kronrod rule with embedded 7-point Gauss rule (QUADPACK dqk15).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelResult {
    double integral;
    double error;
    double resabs;  // integral of |f|, sets the attainable noise floor
};

template <class F>
PanelResult gk15(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resg = kWg[3] * fc;
    double resk = kWgk[7] * fc;
    double resabs = kWgk[7] * std::abs(fc);
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const double f1 = f(c - dx);
        const double f2 = f(c + dx);
        resk += kWgk[j] * (f1 + f2);
        resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    resk *= h;
    resg *= h;
    resabs *= h;
    return {resk, std::abs(resk - resg), resabs};
}

// Recursive bisection.  |K15 - G7| overestimates the true Kronrod error for
// smooth integrands, so the plain difference is a safe acceptance test; the
// resabs-scaled floor stops subdivision once roundoff dominates.
template <class F>
double adapt(F&& f, double a, double b, double tol, int depth, bool& ok) {
    const PanelResult r = gk15(f, a, b);
    const double width = b - a;
    const double floor = 50.0 * 2.220446049250313e-16 * r.resabs;
    if (r.error <= std::max(tol, floor) ||
        width <= 1e-14 * (std::abs(a) + std::abs(b) + 1.0))
        return r.integral;
    if (depth <= 0) {
        ok = false;
        return r.integral;
    }
    const double m = 0.5 * (a + b);
    const double half = 0.5 * tol;
    return adapt(f, a, m, half, depth - 1, ok) + adapt(f, m, b, half, depth - 1, ok);
}

template <class F>
double integrate_finite(F&& f, double a, double b, const QuadratureSpec& spec, bool& ok) {
    if (!(b > a)) return 0.0;
    const PanelResult first = gk15(f, a, b);
    const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(first.integral));
    return adapt(f, a, b, tol, spec.max_depth, ok);
}

} // namespace

double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    const QuadratureSpec& spec) {
    if (std::isnan(a) || std::isnan(b)) throw std::invalid_argument("integrate_1d: NaN limit");
    if (b <= a) {
        if (b == a) return 0.0;
        throw std::invalid_argument("integrate_1d: b < a");
    }

    bool ok = true;
    double total = 0.0;

    double lo = a;
    if (spec.hint == QuadratureSpec::Hint::log_at_zero && a == 0.0) {
        // k = exp(u) over (0, c].  The slice below k = 1e-20 contributes at
        // most ~5e-19 for integrands with h = O(-log k), below abs_tol.
        const double c = std::min(b, 1.0);
        const double u_lo = std::log(1e-20);
        const double u_hi = std::log(c);
        auto g = [&f](double u) {
            const double k = std::exp(u);
            return f(k) * k;
        };
        total += integrate_finite(g, u_lo, u_hi, spec, ok);
        lo = c;
    }

    if (lo < b) {
        if (std::isinf(b)) {
            // k = lo + s/(1-s) maps [0,1) to [lo, inf)
            auto g = [&f, lo](double s) {
                const double om = 1.0 - s;
                if (om < 1e-14) return 0.0;
                const double fk = f(lo + s / om);
                return fk == 0.0 ? 0.0 : fk / (om * om);
            };
            total += integrate_finite(g, 0.0, 1.0, spec, ok);
        } else {
            total += integrate_finite(f, lo, b, spec, ok);
        }
    }

    if (!ok) throw QuadratureError("integrate_1d: no convergence within max_depth");
    return total;
}

std::vector<double> rk4_step(
    const std::vector<double>& state, double t, double dt,
    const std::function<void(double, const std::vector<double>&, std::vector<double>&)>& f) {
    if (!(dt > 0.0)) throw std::invalid_argument("rk4_step: dt must be > 0");
    const std::size_t n = state.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);

    f(t, state, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = state[i] + 0.5 * dt * k1[i];
    f(t + 0.5 * dt, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = state[i] + 0.5 * dt * k2[i];
    f(t + 0.5 * dt, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = state[i] + dt * k3[i];
    f(t + dt, tmp, k4);

    std::vector<double> out(n);
    const double w = dt / 6.0;
    for (std::size_t i = 0; i < n; ++i)
        out[i] = state[i] + w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

double RadialTable::eval(double r) const {
    const std::size_t n = nodes.size();
    auto it = std::upper_bound(nodes.begin(), nodes.end(), r);
    std::size_t i = it == nodes.begin() ? 0 : static_cast<std::size_t>(it - nodes.begin()) - 1;
    if (i > n - 2) i = n - 2;
    const double x0 = nodes[i], x1 = nodes[i + 1];
    const double h = x1 - x0;
    const double t = (r - x0) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    return h00 * values[i] + h * h10 * derivs[i] + h01 * values[i + 1] + h * h11 * derivs[i + 1];
}

std::vector<double> RadialTable::pchip_derivatives(const std::vector<double>& x,
                                                   const std::vector<double>& v) {
    const std::size_t n = x.size();
    std::vector<double> d(n, 0.0);
    if (n < 2) return d;
    std::vector<double> h(n - 1), slope(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x[i + 1] - x[i];
        slope[i] = (v[i + 1] - v[i]) / h[i];
    }
    if (n == 2) {
        d[0] = d[1] = slope[0];
        return d;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (slope[i - 1] * slope[i] <= 0.0) {
            d[i] = 0.0;
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / slope[i - 1] + w2 / slope[i]);
        }
    }
    // one-sided three-point endpoint formulas with the usual sign clamps
    auto endpoint = [](double h0, double h1, double s0, double s1) {
        double d0 = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
        if (d0 * s0 <= 0.0)
            d0 = 0.0;
        else if (s0 * s1 < 0.0 && std::abs(d0) > 3.0 * std::abs(s0))
            d0 = 3.0 * s0;
        return d0;
    };
    d[0] = endpoint(h[0], h[1], slope[0], slope[1]);
    d[n - 1] = endpoint(h[n - 2], h[n - 3], slope[n - 2], slope[n - 3]);
    return d;
}

void RadialTable::monotone_limit(const std::vector<double>& x, const std::vector<double>& v,
                                 std::vector<double>& d) {
    const std::size_t n = x.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double slope = (v[i + 1] - v[i]) / (x[i + 1] - x[i]);
        if (slope == 0.0) {
            d[i] = 0.0;
            d[i + 1] = 0.0;
            continue;
        }
        double alpha = d[i] / slope;
        double beta = d[i + 1] / slope;
        if (alpha < 0.0) {
            d[i] = 0.0;
            alpha = 0.0;
        }
        if (beta < 0.0) {
            d[i + 1] = 0.0;
            beta = 0.0;
        }
        const double s2 = alpha * alpha + beta * beta;
        if (s2 > 9.0) {
            const double tau = 3.0 / std::sqrt(s2);
            d[i] = tau * alpha * slope;
            d[i + 1] = tau * beta * slope;
        }
    }
}

} // namespace epr
