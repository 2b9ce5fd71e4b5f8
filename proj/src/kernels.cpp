#include "epr/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "epr/bessel.hpp"
#include "epr/errors.hpp"

namespace epr {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kInv2Pi = 0.159154943091895335768883763372514362;
} // namespace

Vec2 singular_kernel(Vec2 x) {
    const double r2 = norm2(x);
    if (r2 == 0.0) throw std::domain_error("singular_kernel: undefined at x = 0");
    const double c = -kInv2Pi / r2;
    return {c * x.y, -c * x.x};
}

double blob_shape(double r) {
    const double r2 = r * r;
    return r2 / (r2 + 1.0);
}

double alpha_shape(double r) {
    if (r == 0.0) return 0.0;
    if (r > 700.0) return 1.0;  // r K1(r) below double underflow
    return 1.0 - r * bessel_k1(r);
}

double quasi_lipschitz_modulus(double r) {
    if (r < 0.0) throw std::domain_error("quasi_lipschitz_modulus: requires r >= 0");
    if (r == 0.0) return 0.0;
    return r < 1.0 ? r * (1.0 - std::log(r)) : 1.0;
}

KernelProfile blob_profile() {
    KernelProfile p;
    p.name = "blob";
    p.h = [](double k) {
        const double t = k * k + 1.0;
        return 2.0 / (t * t);
    };
    p.singularity = SingularityClass::bounded;
    p.radial_mass = 1.0;             // int 2k/(k^2+1)^2 dk
    p.first_radial_moment = kPi / 2;  // int 2k^2/(k^2+1)^2 dk
    p.nonnegative = true;
    return p;
}

KernelProfile alpha_profile() {
    KernelProfile p;
    p.name = "alpha";
    p.h = [](double k) {
        if (k <= 0.0) return std::numeric_limits<double>::infinity();
        if (k > 700.0) return 0.0;
        return bessel_k0(k);
    };
    p.singularity = SingularityClass::logarithmic;
    p.radial_mass = 1.0;             // int k K0(k) dk
    p.first_radial_moment = kPi / 2;  // int k^2 K0(k) dk
    p.nonnegative = true;
    return p;
}

KernelProfile profile_from_csv(const std::string& path, double normalization_tol) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("profile_from_csv: cannot open " + path);

    std::vector<double> ks, hs;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double k, h;
        if (!(row >> k >> h)) continue;  // header or comment line
        ks.push_back(k);
        hs.push_back(h);
    }
    if (ks.size() < 4) throw std::invalid_argument("profile_from_csv: need at least 4 samples");
    for (std::size_t i = 1; i < ks.size(); ++i)
        if (!(ks[i] > ks[i - 1]))
            throw std::invalid_argument("profile_from_csv: radii must be strictly increasing");
    if (ks.front() < 0.0) throw std::invalid_argument("profile_from_csv: radii must be >= 0");

    auto table = std::make_shared<RadialTable>();
    table->nodes = ks;
    table->values = hs;
    table->derivs = RadialTable::pchip_derivatives(ks, hs);

    KernelProfile p;
    auto stem = path.find_last_of("/\\");
    p.name = stem == std::string::npos ? path : path.substr(stem + 1);
    p.support_radius = ks.back();
    const double k_first = ks.front();
    const double h_first = hs.front();
    p.h = [table, k_first, h_first](double k) {
        if (k >= table->nodes.back()) return 0.0;
        if (k <= k_first) return h_first;  // flat extension below the first sample
        return table->eval(k);
    };
    p.nonnegative = true;
    double h_max = 0.0;
    for (double v : hs) {
        if (v < 0.0) p.nonnegative = false;
        h_max = std::max(h_max, std::abs(v));
    }

    // Heuristic singularity classification: a -log(k) blow-up shows as a
    // slope against log k between the two leading samples.
    p.singularity = SingularityClass::bounded;
    if (ks.size() >= 2 && ks[0] > 0.0 && ks[0] < 0.5) {
        const double slope = (hs[0] - hs[1]) / std::log(ks[1] / ks[0]);
        if (slope > 0.05 * h_max) p.singularity = SingularityClass::logarithmic;
    }

    QuadratureSpec spec;
    if (p.singularity == SingularityClass::logarithmic && ks.front() == 0.0)
        spec.hint = QuadratureSpec::Hint::log_at_zero;
    const auto& h = p.h;
    p.radial_mass = integrate_1d([&h](double k) { return k * h(k); }, 0.0, p.support_radius, spec);
    p.first_radial_moment =
        integrate_1d([&h](double k) { return k * k * std::abs(h(k)); }, 0.0, p.support_radius, spec);

    if (std::abs(p.radial_mass - 1.0) > normalization_tol)
        throw NormalizationError("profile_from_csv: radial mass " + std::to_string(p.radial_mass) +
                                 " deviates from 1 beyond tolerance");
    return p;
}

} // namespace epr
