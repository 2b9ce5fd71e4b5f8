#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "epr/errors.hpp"
#include "epr/kernels.hpp"

namespace epr {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kInv2Pi = 0.159154943091895335768883763372514362;

// splitmix64; std::uniform_real_distribution is implementation-defined, this
// keeps seeded sampling reproducible everywhere.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double log_uniform(double lo, double hi) {
        return lo * std::exp(uniform01() * std::log(hi / lo));
    }
};

} // namespace

L1Distance l1_kernel_distance(const ShapeTable& shape, double epsilon) {
    L1Distance out;
    if (shape.kind() == ShapeTable::Kind::exact) return out;
    if (!(epsilon > 0.0)) throw std::invalid_argument("l1_kernel_distance: epsilon must be > 0");

    QuadratureSpec spec;
    spec.abs_tol = 1e-11;
    spec.rel_tol = 1e-9;

    double integral;
    if (shape.kind() == ShapeTable::Kind::tabulated) {
        // table part plus the tail beyond the grid, the latter reduced to a
        // single profile integral: int_R^inf tail(r) dr = int_R^inf (k-R) k h dk
        const double r_max = shape.tail_radius();
        integral = integrate_1d(
            [&shape](double r) { return std::abs(shape.shape_function(r) - 1.0); }, 0.0, r_max,
            spec);
        const KernelProfile& p = *shape.profile();
        if (p.support_radius > r_max) {
            integral += integrate_1d(
                [&p, r_max](double k) { return (k - r_max) * k * std::abs(p.h(k)); }, r_max,
                p.support_radius, spec);
        }
    } else {
        integral = integrate_1d(
            [&shape](double r) { return std::abs(shape.shape_function(r) - 1.0); }, 0.0, kInfinity,
            spec);
    }

    out.value = epsilon * integral;
    out.bound = epsilon * shape.first_radial_moment();
    out.within_bound = out.value <= out.bound * (1.0 + 1e-9) + 1e-12;
    return out;
}

KernelLemmaReport verify_kernel_lemmas(const ShapeTable& shape, const KernelLemmaSpec& spec) {
    KernelLemmaReport report;
    report.seed = spec.seed;
    report.pairs = spec.pairs;
    const double eps = shape.epsilon();
    SplitMix64 rng(spec.seed);

    // (a) boundedness scan over log-uniform radii
    double max_k = 0.0;
    for (int i = 0; i < spec.samples; ++i) {
        const double r = rng.log_uniform(spec.radius_lo * eps, spec.radius_hi * eps);
        const double th = 2.0 * kPi * rng.uniform01();
        const Vec2 x{r * std::cos(th), r * std::sin(th)};
        max_k = std::max(max_k, norm(shape.kernel(x)));
    }
    report.max_abs_kernel = max_k;

    // (b) far-field decay, |x| |K_h(x)| against 1/(2 pi)
    for (double rr : spec.decay_radii) {
        const double r = rr * eps;
        const double v = r * norm(shape.kernel({r, 0.0}));
        report.decay.push_back({rr, v, std::abs(v - kInv2Pi)});
    }

    // (c) empirical quasi-Lipschitz constant over nested sample sets, so the
    // doubled estimate can only grow
    auto ql_max = [&shape, &spec, eps](SplitMix64& gen, int n, double seed_max) {
        double c = seed_max;
        for (int i = 0; i < n; ++i) {
            const double r = gen.log_uniform(spec.radius_lo * eps, spec.radius_hi * eps);
            const double th = 2.0 * kPi * gen.uniform01();
            const Vec2 x{r * std::cos(th), r * std::sin(th)};
            const double sep = gen.log_uniform(1e-4, 4.0);
            const double ph = 2.0 * kPi * gen.uniform01();
            const Vec2 xp{x.x + sep * std::cos(ph), x.y + sep * std::sin(ph)};
            const double num = norm(shape.kernel(x) - shape.kernel(xp));
            c = std::max(c, num / quasi_lipschitz_modulus(sep));
        }
        return c;
    };
    SplitMix64 ql_rng(spec.seed ^ 0x5DEECE66Dull);
    report.ql_constant = ql_max(ql_rng, spec.pairs, 0.0);
    report.ql_constant_doubled = ql_max(ql_rng, spec.pairs, report.ql_constant);
    report.ql_rel_change =
        (report.ql_constant_doubled - report.ql_constant) / report.ql_constant;
    return report;
}

std::string KernelLemmaReport::to_json() const {
    nlohmann::ordered_json j;
    j["max_abs_kernel"] = max_abs_kernel;
    j["decay_limit"] = kInv2Pi;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& d : decay)
        arr.push_back({{"radius_over_eps", d.radius}, {"r_abs_k", d.value}, {"deviation", d.deviation}});
    j["decay"] = arr;
    j["quasi_lipschitz"] = {{"pairs", pairs},
                            {"constant", ql_constant},
                            {"constant_doubled", ql_constant_doubled},
                            {"rel_change", ql_rel_change},
                            {"seed", seed}};
    return j.dump(2);
}

} // namespace epr
