#include "epr/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "epr/errors.hpp"

namespace epr {

namespace {

constexpr double kInv2Pi = 0.159154943091895335768883763372514362;
constexpr std::size_t kBlock = 64;
constexpr std::size_t kSerialCutoff = 1 << 15;  // interactions below this stay single-threaded

// Per-target accumulation in fixed index order with block partial sums; the
// result is independent of how targets are partitioned across threads.
// CoefFn maps squared distance to S(|d|/eps)/|d|^2; it returns 0 for pairs
// that contribute nothing (coincident points under a regularized kernel).
template <class CoefFn>
void sum_range(const Vec2* src, const double* gamma2pi, std::size_t ns, const Vec2* tgt,
               std::size_t lo, std::size_t hi, std::size_t n_self, Vec2* out, CoefFn&& coef) {
    for (std::size_t i = lo; i < hi; ++i) {
        const Vec2 t = tgt[i];
        const bool self = i < n_self;
        double ux = 0.0, uy = 0.0;
        for (std::size_t j0 = 0; j0 < ns; j0 += kBlock) {
            const std::size_t j1 = std::min(j0 + kBlock, ns);
            double bx = 0.0, by = 0.0;
            for (std::size_t j = j0; j < j1; ++j) {
                if (self && j == i) continue;
                const double dx = t.x - src[j].x;
                const double dy = t.y - src[j].y;
                const double w = gamma2pi[j] * coef(dx * dx + dy * dy);
                bx -= w * dy;
                by += w * dx;
            }
            ux += bx;
            uy += by;
        }
        out[i] = {ux, uy};
    }
}

struct VelocityContext {
    const Vec2* src;
    const double* gamma2pi;
    std::size_t ns;
    const Vec2* tgt;
    std::size_t nt;
    std::size_t n_self;
    Vec2* out;
    int threads;
};

template <class CoefFn>
void run_parallel(const VelocityContext& ctx, CoefFn&& coef) {
    const std::size_t work = ctx.ns * ctx.nt;
    if (ctx.threads <= 1 || work < kSerialCutoff || ctx.nt < 2) {
        sum_range(ctx.src, ctx.gamma2pi, ctx.ns, ctx.tgt, 0, ctx.nt, ctx.n_self, ctx.out, coef);
        return;
    }
    const std::size_t nthreads = std::min<std::size_t>(ctx.threads, ctx.nt);
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    const std::size_t chunk = (ctx.nt + nthreads - 1) / nthreads;
    for (std::size_t k = 0; k < nthreads; ++k) {
        const std::size_t lo = k * chunk;
        const std::size_t hi = std::min(lo + chunk, ctx.nt);
        if (lo >= hi) break;
        pool.emplace_back([&ctx, lo, hi, &coef] {
            sum_range(ctx.src, ctx.gamma2pi, ctx.ns, ctx.tgt, lo, hi, ctx.n_self, ctx.out, coef);
        });
    }
    for (auto& th : pool) th.join();
}

// n_self: number of leading targets identified with the source of equal index
// (their j == i term is skipped).
void velocities(const ShapeTable& shape, const Vec2* src, const double* gamma2pi, std::size_t ns,
                const Vec2* tgt, std::size_t nt, std::size_t n_self, Vec2* out, int threads) {
    VelocityContext ctx{src, gamma2pi, ns, tgt, nt, n_self, out, threads};
    switch (shape.kind()) {
        case ShapeTable::Kind::blob: {
            const double e2 = shape.epsilon() * shape.epsilon();
            run_parallel(ctx, [e2](double r2) { return 1.0 / (r2 + e2); });
            return;
        }
        case ShapeTable::Kind::exact: {
            std::atomic<bool> collision{false};
            run_parallel(ctx, [&collision](double r2) {
                if (r2 == 0.0) {
                    collision.store(true, std::memory_order_relaxed);
                    return 0.0;
                }
                return 1.0 / r2;
            });
            if (collision.load())
                throw CollisionError(
                    "induced_velocity: exact kernel at zero separation between distinct particles");
            return;
        }
        default:
            run_parallel(ctx, [&shape](double r2) {
                return r2 == 0.0 ? 0.0 : shape.kernel_coefficient(r2);
            });
            return;
    }
}

std::vector<double> scaled_circulations(const VortexSystem& s) {
    std::vector<double> g(s.size());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = kInv2Pi * s.circulations[i];
    return g;
}

} // namespace

std::vector<Vec2> induced_velocity(const VortexSystem& sources, std::span<const Vec2> targets,
                                   const ShapeTable& shape, int threads) {
    std::vector<Vec2> out(targets.size());
    const std::vector<double> g = scaled_circulations(sources);
    velocities(shape, sources.positions.data(), g.data(), sources.size(), targets.data(),
               targets.size(), 0, out.data(), threads);
    return out;
}

std::vector<Vec2> self_induced_velocity(const VortexSystem& sources, const ShapeTable& shape,
                                        int threads) {
    std::vector<Vec2> out(sources.size());
    const std::vector<double> g = scaled_circulations(sources);
    velocities(shape, sources.positions.data(), g.data(), sources.size(),
               sources.positions.data(), sources.size(), sources.size(), out.data(), threads);
    return out;
}

namespace {

// Shared RK4 driver for evolve/passive_tracers: the first ns entries of the
// state are the sources, the rest are tracers.  All points are advected by
// the velocity the sources induce; tracers never feed back.
AdvectResult advect_core(const VortexSystem& system, std::span<const Vec2> tracers,
                         const ShapeTable& shape, double t_end, double dt, int sample_every,
                         int threads, bool with_diagnostics) {
    if (!(dt > 0.0)) throw std::invalid_argument("evolve: dt must be > 0");
    if (!(t_end > 0.0)) throw std::invalid_argument("evolve: t_end must be > 0");
    if (sample_every < 1) sample_every = 1;

    const std::size_t ns = system.size();
    const std::size_t nt = tracers.size();
    const std::size_t n = ns + nt;
    const std::vector<double> g2pi = scaled_circulations(system);

    long long n_steps = std::llround(t_end / dt);
    double last_dt = dt;
    if (n_steps < 1 || std::abs(n_steps * dt - t_end) > 1e-9 * std::max(1.0, t_end)) {
        n_steps = static_cast<long long>(std::ceil(t_end / dt - 1e-12));
        last_dt = t_end - (n_steps - 1) * dt;
    }

    std::vector<Vec2> x(n), xs(n), k1(n), k2(n), k3(n), k4(n);
    for (std::size_t i = 0; i < ns; ++i) x[i] = system.positions[i];
    for (std::size_t i = 0; i < nt; ++i) x[ns + i] = tracers[i];

    AdvectResult result;
    result.sources.system = system;
    result.tracers.system.positions.assign(tracers.begin(), tracers.end());
    result.tracers.system.circulations.assign(nt, 0.0);
    result.tracers.system.label = "tracers";

    auto eval = [&](const std::vector<Vec2>& state, std::vector<Vec2>& vel) {
        velocities(shape, state.data(), g2pi.data(), ns, state.data(), n, ns, vel.data(), threads);
    };
    auto record = [&](double t) {
        result.sources.times.push_back(t);
        result.sources.states.emplace_back(x.begin(), x.begin() + ns);
        if (with_diagnostics)
            result.sources.diagnostics.push_back(
                diagnostics({x.data(), ns}, system.circulations, shape));
        if (nt) {
            result.tracers.times.push_back(t);
            result.tracers.states.emplace_back(x.begin() + ns, x.end());
        }
    };

    record(0.0);
    for (long long step = 0; step < n_steps; ++step) {
        const double h = (step == n_steps - 1) ? last_dt : dt;
        eval(x, k1);
        for (std::size_t i = 0; i < n; ++i) xs[i] = x[i] + (0.5 * h) * k1[i];
        eval(xs, k2);
        for (std::size_t i = 0; i < n; ++i) xs[i] = x[i] + (0.5 * h) * k2[i];
        eval(xs, k3);
        for (std::size_t i = 0; i < n; ++i) xs[i] = x[i] + h * k3[i];
        eval(xs, k4);
        const double w = h / 6.0;
        for (std::size_t i = 0; i < n; ++i)
            x[i] += w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if ((step + 1) % sample_every == 0 || step == n_steps - 1)
            record(step == n_steps - 1 ? t_end : (step + 1) * dt);
    }
    return result;
}

} // namespace

Trajectory evolve(const VortexSystem& system, const ShapeTable& shape, double t_end, double dt,
                  int sample_every, int threads, bool with_diagnostics) {
    return advect_core(system, {}, shape, t_end, dt, sample_every, threads, with_diagnostics)
        .sources;
}

AdvectResult passive_tracers(const VortexSystem& system, std::span<const Vec2> tracers,
                             const ShapeTable& shape, double t_end, double dt, int sample_every,
                             int threads, bool with_diagnostics) {
    return advect_core(system, tracers, shape, t_end, dt, sample_every, threads, with_diagnostics);
}

namespace {
void put17(std::ostream& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
}
} // namespace

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
    out << "t,particle_id,x,y\n";
    for (std::size_t s = 0; s < traj.samples(); ++s) {
        for (std::size_t p = 0; p < traj.states[s].size(); ++p) {
            put17(out, traj.times[s]);
            out << ',' << p << ',';
            put17(out, traj.states[s][p].x);
            out << ',';
            put17(out, traj.states[s][p].y);
            out << '\n';
        }
    }
}

void write_diagnostics_jsonl(const Trajectory& traj, std::ostream& out) {
    for (std::size_t s = 0; s < traj.diagnostics.size(); ++s) {
        const DiagnosticsRecord& d = traj.diagnostics[s];
        out << "{\"t\": ";
        put17(out, traj.times[s]);
        out << ", \"circulation\": ";
        put17(out, d.circulation);
        out << ", \"impulse_x\": ";
        put17(out, d.impulse.x);
        out << ", \"impulse_y\": ";
        put17(out, d.impulse.y);
        out << ", \"angular_impulse\": ";
        put17(out, d.angular_impulse);
        out << ", \"hamiltonian\": ";
        put17(out, d.hamiltonian);
        out << "}\n";
    }
}

} // namespace epr
