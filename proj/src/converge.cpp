#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "epr/dynamics.hpp"

namespace epr {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Exact-Euler tracer orbit around a radially symmetric patch: rigid rotation
// at Omega(r0) = omega * min(1, R^2/r0^2) / 2.
Vec2 exact_orbit(Vec2 x0, const RankinePatch& patch, double t) {
    const double r2 = norm2(x0);
    const double R2 = patch.radius * patch.radius;
    const double om = 0.5 * patch.omega * (r2 <= R2 ? 1.0 : R2 / r2);
    const double c = std::cos(om * t), s = std::sin(om * t);
    return {c * x0.x - s * x0.y, s * x0.x + c * x0.y};
}

double sup_tracer_error(const Trajectory& tracers, const RankinePatch& patch) {
    double e = 0.0;
    for (std::size_t s = 0; s < tracers.samples(); ++s) {
        const double t = tracers.times[s];
        for (std::size_t p = 0; p < tracers.states[s].size(); ++p) {
            const Vec2 ref = exact_orbit(tracers.system.positions[p], patch, t);
            e = std::max(e, norm(tracers.states[s][p] - ref));
        }
    }
    return e;
}

double run_once(const VortexSystem& patch_system, std::span<const Vec2> ring,
                const ConvergenceSpec& spec, double eps, double dt, int sample_every) {
    const ShapeTable shape = make_shape(spec.profile, eps);
    const AdvectResult res = passive_tracers(patch_system, ring, shape, spec.t_end, dt,
                                             sample_every, spec.threads, /*with_diagnostics=*/false);
    return sup_tracer_error(res.tracers, spec.patch);
}

} // namespace

ConvergenceResult convergence_experiment(const ConvergenceSpec& spec) {
    if (spec.eps_list.size() < 2)
        throw std::invalid_argument("convergence_experiment: need at least two eps values");
    for (std::size_t i = 1; i < spec.eps_list.size(); ++i)
        if (!(spec.eps_list[i] < spec.eps_list[i - 1]))
            throw std::invalid_argument("convergence_experiment: eps_list must be strictly decreasing");
    if (spec.tracer_count < 1)
        throw std::invalid_argument("convergence_experiment: need at least one tracer");

    const double R = spec.patch.radius;
    const double pad = R + spec.spacing;
    const BBox box{{-pad, -pad}, {pad, pad}};
    const RankinePatch patch = spec.patch;
    const VortexSystem system = discretize_patch(
        [patch](Vec2 x) { return norm2(x) <= patch.radius * patch.radius ? patch.omega : 0.0; },
        box, spec.spacing);

    std::vector<Vec2> ring(spec.tracer_count);
    for (int k = 0; k < spec.tracer_count; ++k) {
        const double th = 2.0 * kPi * k / spec.tracer_count;
        ring[k] = {spec.tracer_radius * std::cos(th), spec.tracer_radius * std::sin(th)};
    }

    ConvergenceResult out;
    out.eps = spec.eps_list;
    out.bound_exponent = std::exp(-spec.t_end);
    out.particles = static_cast<int>(system.size());
    out.spacing = spec.spacing;
    out.t_end = spec.t_end;
    out.dt = spec.dt;

    for (double eps : spec.eps_list)
        out.error.push_back(run_once(system, ring, spec, eps, spec.dt, spec.sample_every));

    out.monotone = true;
    for (std::size_t i = 1; i < out.error.size(); ++i)
        if (!(out.error[i] < out.error[i - 1])) out.monotone = false;

    // least-squares slope of log E against log eps
    const std::size_t m = out.eps.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double lx = std::log(out.eps[i]);
        const double ly = std::log(out.error[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    out.fitted_order = (m * sxy - sx * sy) / (m * sxx - sx * sx);

    if (spec.dt_check) {
        out.dt_check_eps = spec.eps_list.back();
        out.dt_check_error =
            run_once(system, ring, spec, out.dt_check_eps, 0.5 * spec.dt, 2 * spec.sample_every);
        out.dt_check_rel_change =
            std::abs(out.dt_check_error - out.error.back()) / out.error.back();
    }
    return out;
}

std::string ConvergenceResult::to_json() const {
    nlohmann::ordered_json j;
    j["eps"] = eps;
    j["error"] = error;
    j["fitted_order"] = fitted_order;
    j["bound_exponent"] = bound_exponent;
    j["monotone"] = monotone;
    j["dt_check"] = {{"eps", dt_check_eps},
                     {"error_half_dt", dt_check_error},
                     {"rel_change", dt_check_rel_change}};
    j["particles"] = particles;
    j["spacing"] = spacing;
    j["t_end"] = t_end;
    j["dt"] = dt;
    return j.dump(2);
}

} // namespace epr
