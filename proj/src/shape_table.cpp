#include <cmath>
#include <stdexcept>

#include "epr/bessel.hpp"
#include "epr/errors.hpp"
#include "epr/kernels.hpp"

namespace epr {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kInv2Pi = 0.159154943091895335768883763372514362;
constexpr double kLog2MinusGamma = 0.115931515658412448860757007387276909;  // log 2 - gamma

// tail mass int_r^inf k h(k) dk
double tail_mass(const KernelProfile& p, double r) {
    if (r >= p.support_radius) return 0.0;
    QuadratureSpec spec;
    return integrate_1d([&p](double k) { return k * p.h(k); }, r, p.support_radius, spec);
}

QuadratureSpec panel_spec(const KernelProfile& p, bool at_zero) {
    QuadratureSpec spec;  // abs 1e-12, rel 1e-10
    if (at_zero && p.singularity == SingularityClass::logarithmic)
        spec.hint = QuadratureSpec::Hint::log_at_zero;
    return spec;
}

} // namespace

double ShapeTable::shape_function(double s) const {
    if (s <= 0.0) return kind_ == Kind::exact ? 1.0 : 0.0;
    switch (kind_) {
        case Kind::exact:
            return 1.0;
        case Kind::blob:
            return blob_shape(s);
        case Kind::alpha:
            return alpha_shape(s);
        case Kind::tabulated:
            break;
    }
    const Tables& t = *tables_;
    if (s >= tail_radius_) return 1.0;
    if (s < t.r1) {
        if (singularity_ == SingularityClass::bounded)
            return t.g_r1 * (s / t.r1) * (s / t.r1);
        // logarithmic profiles keep the r^2 log r leading order exactly
        const KernelProfile& p = *profile_;
        return integrate_1d([&p](double k) { return k * p.h(k); }, 0.0, s, panel_spec(p, true));
    }
    return t.g.eval(s);
}

double ShapeTable::kernel_coefficient(double r2) const {
    switch (kind_) {
        case Kind::exact:
            return 1.0 / r2;
        case Kind::blob: {
            const double e = epsilon_;
            return 1.0 / (r2 + e * e);
        }
        case Kind::alpha:
            return alpha_shape(std::sqrt(r2) / epsilon_) / r2;
        case Kind::tabulated:
            break;
    }
    const double s = std::sqrt(r2) / epsilon_;
    const Tables& t = *tables_;
    if (s < t.r1 && singularity_ == SingularityClass::bounded) {
        const double re = t.r1 * epsilon_;
        return t.g_r1 / (re * re);  // ratio form, immune to underflow
    }
    return shape_function(s) / r2;
}

Vec2 ShapeTable::kernel(Vec2 x) const {
    const double r2 = norm2(x);
    if (r2 == 0.0) return {0.0, 0.0};
    const double c = -kInv2Pi * kernel_coefficient(r2);
    return {c * x.y, -c * x.x};
}

double ShapeTable::stream_unit(double s) const {
    switch (kind_) {
        case Kind::exact:
            return -kInv2Pi * std::log(s);
        case Kind::blob:
            return -0.5 * kInv2Pi * std::log(s * s + 1.0);
        case Kind::alpha:
            if (s == 0.0) return -kInv2Pi * kLog2MinusGamma;
            if (s > 700.0) return -kInv2Pi * std::log(s);
            return -kInv2Pi * (std::log(s) + bessel_k0(s));
        case Kind::tabulated:
            break;
    }
    const Tables& t = *tables_;
    if (s >= tail_radius_) return -kInv2Pi * std::log(s);
    if (s >= t.r1) return t.s1.eval(s);
    if (singularity_ == SingularityClass::bounded) {
        // S(sigma) ~ S(r1) (sigma/r1)^2 below the first node, so the inward
        // continuation of dG1/dr = -S/(2 pi r) integrates in closed form.
        return t.s1_r1 + t.g_r1 * (t.r1 * t.r1 - s * s) / (4.0 * kPi * t.r1 * t.r1);
    }
    auto integrand = [this](double sigma) { return shape_function(sigma) / (2.0 * kPi * sigma); };
    QuadratureSpec spec;
    spec.abs_tol = 1e-13;
    return t.s1_r1 + integrate_1d(integrand, s, t.r1, spec);
}

double ShapeTable::stream(double r) const {
    return stream_unit(r / epsilon_) - kInv2Pi * std::log(epsilon_);
}

ShapeTable ShapeTable::with_epsilon(double epsilon) const {
    if (!(epsilon > 0.0)) throw std::invalid_argument("with_epsilon: requires epsilon > 0");
    ShapeTable s = *this;
    s.epsilon_ = epsilon;
    return s;
}

ShapeTable make_shape(const std::string& name, double epsilon) {
    ShapeTable s;
    if (name == "exact") {
        s.kind_ = ShapeTable::Kind::exact;
        s.epsilon_ = 1.0;
        s.tail_radius_ = 0.0;
        s.moment_ = 0.0;
        return s;
    }
    if (!(epsilon > 0.0)) throw std::invalid_argument("make_shape: requires epsilon > 0");
    if (name == "blob") {
        s.kind_ = ShapeTable::Kind::blob;
        s.profile_ = std::make_shared<const KernelProfile>(blob_profile());
        s.tail_radius_ = 1e5;
    } else if (name == "alpha") {
        s.kind_ = ShapeTable::Kind::alpha;
        s.profile_ = std::make_shared<const KernelProfile>(alpha_profile());
        s.tail_radius_ = 50.0;
    } else {
        throw std::invalid_argument("make_shape: unknown kernel '" + name + "'");
    }
    s.epsilon_ = epsilon;
    s.singularity_ = s.profile_->singularity;
    s.moment_ = s.profile_->first_radial_moment;
    s.nonnegative_ = s.profile_->nonnegative;
    return s;
}

ShapeTable build_shape(const KernelProfile& profile, double epsilon, const ShapeGrid& grid) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("build_shape: requires epsilon > 0");
    if (grid.nodes < 16) throw std::invalid_argument("build_shape: too few grid nodes");
    if (!(grid.r_split > 0.0)) throw std::invalid_argument("build_shape: r_split must be > 0");

    // Automatic outer radius: smallest probe with tail mass below target.
    double r_max = grid.r_max;
    if (r_max <= 0.0) {
        if (profile.support_radius < kInfinity) {
            r_max = profile.support_radius;
        } else {
            for (double probe : {20.0, 50.0, 1e2, 1e3, 1e4, 1e5, 1e6}) {
                r_max = probe;
                if (std::abs(tail_mass(profile, probe)) < grid.tail_target) break;
            }
        }
    }
    if (r_max <= grid.r_split)
        throw std::invalid_argument("build_shape: r_max must exceed r_split");

    const int n_lin = grid.nodes / 2;
    const int n_log = grid.nodes - n_lin;
    std::vector<double> nodes;
    nodes.reserve(grid.nodes);
    for (int i = 0; i < n_lin; ++i) nodes.push_back(grid.r_split * i / (n_lin - 1));
    const double ratio = std::log(r_max / grid.r_split);
    for (int j = 1; j <= n_log; ++j)
        nodes.push_back(grid.r_split * std::exp(ratio * j / n_log));
    nodes.back() = r_max;

    // S(r) accumulated panel by panel
    const std::size_t n = nodes.size();
    std::vector<double> values(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        const QuadratureSpec spec = panel_spec(profile, nodes[i - 1] == 0.0);
        const double panel = integrate_1d([&profile](double k) { return k * profile.h(k); },
                                          nodes[i - 1], nodes[i], spec);
        values[i] = values[i - 1] + panel;
    }

    const double tail = tail_mass(profile, r_max);
    if (std::abs(values.back() + tail - 1.0) > grid.normalization_tol)
        throw NormalizationError("build_shape: S(r_max) + tail = " +
                                 std::to_string(values.back() + tail) + ", expected 1");

    // exact derivatives S'(r) = r h(r), monotonicity-limited
    std::vector<double> derivs(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) derivs[i] = nodes[i] * profile.h(nodes[i]);
    RadialTable::monotone_limit(nodes, values, derivs);

    auto tables = std::make_shared<ShapeTable::Tables>();
    tables->g.nodes = nodes;
    tables->g.values = values;
    tables->g.derivs = derivs;
    tables->r1 = nodes[1];
    tables->g_r1 = values[1];

    // Stream function: integrate dG1/dr = -S/(2 pi r) inward from the
    // anchor G1(r_max) = -log(r_max)/(2 pi).
    std::vector<double> sv(n, 0.0), sd(n, 0.0);
    sv[n - 1] = -kInv2Pi * std::log(r_max);
    auto g_of = [&tables](double s) { return tables->g.eval(s); };
    for (std::size_t i = n - 1; i-- > 0;) {
        QuadratureSpec spec;
        spec.abs_tol = 1e-13;
        double panel;
        if (i == 0) {
            // first panel: use the sub-r1 closed form for bounded profiles,
            // the profile quadrature otherwise
            if (profile.singularity == SingularityClass::bounded) {
                panel = tables->g_r1 / (4.0 * kPi);
            } else {
                auto f = [&profile](double sigma) {
                    QuadratureSpec inner = panel_spec(profile, true);
                    const double g = integrate_1d(
                        [&profile](double k) { return k * profile.h(k); }, 0.0, sigma, inner);
                    return g / (2.0 * kPi * sigma);
                };
                // below 1e-8 the integrand is O(sigma log sigma), negligible
                panel = integrate_1d(f, 1e-8, nodes[1], spec);
            }
        } else {
            panel = integrate_1d([&g_of](double sigma) { return g_of(sigma) / (2.0 * kPi * sigma); },
                                 nodes[i], nodes[i + 1], spec);
        }
        sv[i] = sv[i + 1] + panel;
    }
    for (std::size_t i = 1; i < n; ++i) sd[i] = -values[i] / (2.0 * kPi * nodes[i]);
    tables->s1.nodes = nodes;
    tables->s1.values = sv;
    tables->s1.derivs = sd;
    tables->s1_r1 = sv[1];

    ShapeTable s;
    s.kind_ = ShapeTable::Kind::tabulated;
    s.epsilon_ = epsilon;
    s.tail_radius_ = r_max;
    s.singularity_ = profile.singularity;
    s.moment_ = profile.first_radial_moment;
    s.nonnegative_ = profile.nonnegative;
    s.profile_ = std::make_shared<const KernelProfile>(profile);
    s.tables_ = tables;
    return s;
}

} // namespace epr
