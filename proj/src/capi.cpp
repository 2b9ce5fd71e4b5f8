#include "eulerpoincare.h"

#include <cstring>
#include <fstream>
#include <new>
#include <string>

#include "epr/bessel.hpp"
#include "epr/dynamics.hpp"
#include "epr/errors.hpp"
#include "epr/kernels.hpp"
#include "epr/measures.hpp"
#include "epr/picard.hpp"

struct epr_profile {
    epr::KernelProfile p;
};
struct epr_shape {
    epr::ShapeTable s;
};
struct epr_system {
    epr::VortexSystem v;
};
struct epr_trajectory {
    epr::Trajectory t;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

// map core exceptions onto status codes
template <class Fn>
epr_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return EPR_OK;
    } catch (const epr::QuadratureError& e) {
        set_error(e.what());
        return EPR_ERR_QUADRATURE;
    } catch (const epr::NormalizationError& e) {
        set_error(e.what());
        return EPR_ERR_NOT_NORMALIZED;
    } catch (const epr::CollisionError& e) {
        set_error(e.what());
        return EPR_ERR_COLLISION;
    } catch (const std::domain_error& e) {
        set_error(e.what());
        return EPR_ERR_DOMAIN;
    } catch (const std::invalid_argument& e) {
        set_error(e.what());
        return EPR_ERR_INVALID_ARGUMENT;
    } catch (const std::exception& e) {
        set_error(e.what());
        return EPR_ERR_INTERNAL;
    } catch (...) {
        set_error("unknown error");
        return EPR_ERR_INTERNAL;
    }
}

char* dup_string(const std::string& s) {
    char* out = new (std::nothrow) char[s.size() + 1];
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

} // namespace

extern "C" {

const char* epr_version(void) { return EPR_VERSION_STRING; }

const char* epr_last_error(void) { return g_last_error.c_str(); }

void epr_string_free(char* s) { delete[] s; }

epr_status epr_bessel_k0(double x, double* out) {
    if (!out) return EPR_ERR_INVALID_ARGUMENT;
    return guarded([&] { *out = epr::bessel_k0(x); });
}

epr_status epr_bessel_k1(double x, double* out) {
    if (!out) return EPR_ERR_INVALID_ARGUMENT;
    return guarded([&] { *out = epr::bessel_k1(x); });
}

double epr_blob_shape(double r) { return epr::blob_shape(r); }

double epr_alpha_shape(double r) { return epr::alpha_shape(r); }

double epr_quasi_lipschitz_modulus(double r) { return epr::quasi_lipschitz_modulus(r); }

epr_status epr_singular_kernel(double x, double y, double out_uv[2]) {
    if (!out_uv) return EPR_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        const epr::Vec2 k = epr::singular_kernel({x, y});
        out_uv[0] = k.x;
        out_uv[1] = k.y;
    });
}

epr_status epr_profile_builtin(const char* name, epr_profile** out) {
    if (!name || !out) return EPR_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        std::string n(name);
        if (n == "blob")
            *out = new epr_profile{epr::blob_profile()};
        else if (n == "alpha")
            *out = new epr_profile{epr::alpha_profile()};
        else
            throw std::invalid_argument("unknown profile '" + n + "'");
    });
}

epr_status epr_profile_from_csv(const char* path, epr_profile** out) {
    if (!path || !out) return EPR_ERR_INVALID_ARGUMENT;
    return guarded([&] { *out = new epr_profile{epr::profile_from_csv(path)}; });
}

double epr_profile_first_radial_moment(const epr_profile* p) {
    return p ? p->p.first_radial_moment : 0.0;
}

void epr_profile_free(epr_profile* p) { delete p; }

epr_status epr_shape_builtin(const char* name, double epsilon, epr_shape** out) {
    if (!name || !out) return EPR_ERR_INVALID_ARGUMENT;
    return guarded([&] { *out = new epr_shape{epr::make_shape(name, epsilon)}; });
}

epr_status epr_shape_build(const epr_profile* p, double epsilon, int nodes, double r_max,
                           epr_shape** out) {
    if (!p || !out) return EPR_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        epr::ShapeGrid grid;
        if (nodes > 0) grid.nodes = nodes;
        if (r_max > 0.0) grid.r_max = r_max;
        *out = new epr_shape{epr::build_shape(p->p, epsilon, grid)};
    });
}

epr_status epr_shape_with_epsilon(const epr_shape* s, double epsilon, epr_shape** out) {
    if (!s || !out) return EPR_ERR_INVALID_ARGUMENT;
    return guarded([&] { *out = new epr_shape{s->s.with_epsilon(epsilon)}; });
}

double epr_shape_epsilon(const epr_shape* s) { return s ? s->s.epsilon() : 0.0; }

epr_status epr_shape_function(const epr_shape* s, double scaled_r, double* out) {
    if (!s || !out) return EPR_ERR_INVALID_ARGUMENT;
    return guarded([&] { *out = s->s.shape_function(scaled_r); });
}

epr_status epr_kernel_eval(const epr_shape* s, double x, double y, double out_uv[2]) {
    if (!s || !out_uv) return EPR_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        const epr::Vec2 k = s->s.kernel({x, y});
        out_uv[0] = k.x;
        out_uv[1] = k.y;
    });
}

epr_status epr_stream_eval(const epr_shape* s, double r, double* out) {
    if (!s || !out) return EPR_ERR_INVALID_ARGUMENT;
    return guarded([&] { *out = s->s.stream(r); });
}

epr_status epr_l1_kernel_distance(const epr_shape* s, double epsilon, double* value,
                                  double* bound) {
    if (!s || !value || !bound) return EPR_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        const epr::L1Distance d = epr::l1_kernel_distance(s->s, epsilon);
        *value = d.value;
        *bound = d.bound;
    });
}

epr_status epr_verify_kernel_lemmas(const epr_shape* s, int pairs, unsigned long long seed,
                                    char** json_out) {
    if (!s || !json_out) return EPR_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        epr::KernelLemmaSpec spec;
        if (pairs > 0) spec.pairs = pairs;
        spec.seed = seed;
        *json_out = dup_string(epr::verify_kernel_lemmas(s->s, spec).to_json());
    });
}

void epr_shape_free(epr_shape* s) { delete s; }

epr_status epr_system_points(const double* xy, const double* gamma, int n, epr_system** out) {
    if ((!xy || !gamma) && n > 0) return EPR_ERR_INVALID_ARGUMENT;
    if (!out || n < 0) return EPR_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        std::vector<epr::Vec2> pos(n);
        std::vector<double> circ(n);
        for (int i = 0; i < n; ++i) {
            pos[i] = {xy[2 * i], xy[2 * i + 1]};
            circ[i] = gamma[i];
        }
        *out = new epr_system{epr::point_vortices(std::move(pos), std::move(circ))};
    });
}

epr_status epr_system_patch(epr_scalar_field omega, void* ctx, const double bbox_ltrb[4],
                            double spacing, epr_system** out) {
    if (!omega || !bbox_ltrb || !out) return EPR_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        epr::BBox box{{bbox_ltrb[0], bbox_ltrb[1]}, {bbox_ltrb[2], bbox_ltrb[3]}};
        *out = new epr_system{epr::discretize_patch(
            [omega, ctx](epr::Vec2 p) { return omega(p.x, p.y, ctx); }, box, spacing)};
    });
}

epr_status epr_system_sheet(epr_curve_fn curve, void* curve_ctx, epr_density_fn strength,
                            void* strength_ctx, double s0, double s1, int n, epr_system** out) {
    if (!curve || !strength || !out) return EPR_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        *out = new epr_system{epr::discretize_sheet(
            [curve, curve_ctx](double s) {
                double xy[2];
                curve(s, curve_ctx, xy);
                return epr::Vec2{xy[0], xy[1]};
            },
            [strength, strength_ctx](double s) { return strength(s, strength_ctx); }, s0, s1, n)};
    });
}

int epr_system_size(const epr_system* s) { return s ? static_cast<int>(s->v.size()) : 0; }

double epr_system_total_circulation(const epr_system* s) {
    return s ? s->v.total_circulation() : 0.0;
}

epr_status epr_system_get(const epr_system* s, double* xy, double* gamma) {
    if (!s) return EPR_ERR_INVALID_ARGUMENT;
    for (std::size_t i = 0; i < s->v.size(); ++i) {
        if (xy) {
            xy[2 * i] = s->v.positions[i].x;
            xy[2 * i + 1] = s->v.positions[i].y;
        }
        if (gamma) gamma[i] = s->v.circulations[i];
    }
    g_last_error.clear();
    return EPR_OK;
}

epr_status epr_system_write_csv(const epr_system* s, const char* path) {
    if (!s || !path) return EPR_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::invalid_argument(std::string("cannot open ") + path);
        epr::write_system_csv(s->v, out);
    });
}

epr_status epr_system_read_csv(const char* path, epr_system** out) {
    if (!path || !out) return EPR_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        std::ifstream in(path);
        if (!in) throw std::invalid_argument(std::string("cannot open ") + path);
        *out = new epr_system{epr::read_system_csv(in)};
    });
}

void epr_system_free(epr_system* s) { delete s; }

epr_status epr_system_diagnostics(const epr_system* s, const epr_shape* shape,
                                  epr_diagnostics* out) {
    if (!s || !shape || !out) return EPR_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        const epr::DiagnosticsRecord d = epr::diagnostics(s->v, shape->s);
        *out = {d.circulation, d.impulse.x, d.impulse.y, d.angular_impulse, d.hamiltonian};
    });
}

epr_status epr_induced_velocity(const epr_system* sources, const epr_shape* shape,
                                const double* targets_xy, int n_targets, int threads,
                                double* out_uv) {
    if (!sources || !shape || !targets_xy || !out_uv || n_targets < 0)
        return EPR_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        std::vector<epr::Vec2> tgt(n_targets);
        for (int i = 0; i < n_targets; ++i) tgt[i] = {targets_xy[2 * i], targets_xy[2 * i + 1]};
        const auto u = epr::induced_velocity(sources->v, tgt, shape->s, threads);
        for (int i = 0; i < n_targets; ++i) {
            out_uv[2 * i] = u[i].x;
            out_uv[2 * i + 1] = u[i].y;
        }
    });
}

epr_status epr_self_induced_velocity(const epr_system* sources, const epr_shape* shape,
                                     int threads, double* out_uv) {
    if (!sources || !shape || !out_uv) return EPR_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        const auto u = epr::self_induced_velocity(sources->v, shape->s, threads);
        for (std::size_t i = 0; i < u.size(); ++i) {
            out_uv[2 * i] = u[i].x;
            out_uv[2 * i + 1] = u[i].y;
        }
    });
}

epr_status epr_evolve(const epr_system* s, const epr_shape* shape, double t_end, double dt,
                      int sample_every, int threads, int with_diagnostics, epr_trajectory** out) {
    if (!s || !shape || !out) return EPR_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        *out = new epr_trajectory{
            epr::evolve(s->v, shape->s, t_end, dt, sample_every, threads, with_diagnostics != 0)};
    });
}

epr_status epr_passive_tracers(const epr_system* s, const epr_shape* shape,
                               const double* tracers_xy, int n_tracers, double t_end, double dt,
                               int sample_every, int threads, int with_diagnostics,
                               epr_trajectory** out_sources, epr_trajectory** out_tracers) {
    if (!s || !shape || (!tracers_xy && n_tracers > 0) || n_tracers < 0)
        return EPR_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        std::vector<epr::Vec2> tr(n_tracers);
        for (int i = 0; i < n_tracers; ++i) tr[i] = {tracers_xy[2 * i], tracers_xy[2 * i + 1]};
        epr::AdvectResult res = epr::passive_tracers(s->v, tr, shape->s, t_end, dt, sample_every,
                                                     threads, with_diagnostics != 0);
        if (out_sources) *out_sources = new epr_trajectory{std::move(res.sources)};
        if (out_tracers) *out_tracers = new epr_trajectory{std::move(res.tracers)};
    });
}

int epr_trajectory_samples(const epr_trajectory* t) {
    return t ? static_cast<int>(t->t.samples()) : 0;
}

int epr_trajectory_particles(const epr_trajectory* t) {
    return t ? static_cast<int>(t->t.particles()) : 0;
}

epr_status epr_trajectory_times(const epr_trajectory* t, double* out) {
    if (!t || !out) return EPR_ERR_INVALID_ARGUMENT;
    for (std::size_t i = 0; i < t->t.times.size(); ++i) out[i] = t->t.times[i];
    g_last_error.clear();
    return EPR_OK;
}

epr_status epr_trajectory_positions(const epr_trajectory* t, int sample, double* xy) {
    if (!t || !xy || sample < 0 || sample >= static_cast<int>(t->t.samples()))
        return EPR_ERR_INVALID_ARGUMENT;
    const auto& st = t->t.states[sample];
    for (std::size_t i = 0; i < st.size(); ++i) {
        xy[2 * i] = st[i].x;
        xy[2 * i + 1] = st[i].y;
    }
    g_last_error.clear();
    return EPR_OK;
}

epr_status epr_trajectory_diagnostics(const epr_trajectory* t, int sample, epr_diagnostics* out) {
    if (!t || !out || sample < 0 || sample >= static_cast<int>(t->t.diagnostics.size()))
        return EPR_ERR_INVALID_ARGUMENT;
    const epr::DiagnosticsRecord& d = t->t.diagnostics[sample];
    *out = {d.circulation, d.impulse.x, d.impulse.y, d.angular_impulse, d.hamiltonian};
    g_last_error.clear();
    return EPR_OK;
}

epr_status epr_trajectory_write_csv(const epr_trajectory* t, const char* path) {
    if (!t || !path) return EPR_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::invalid_argument(std::string("cannot open ") + path);
        epr::write_trajectory_csv(t->t, out);
    });
}

epr_status epr_trajectory_write_diagnostics_jsonl(const epr_trajectory* t, const char* path) {
    if (!t || !path) return EPR_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::invalid_argument(std::string("cannot open ") + path);
        epr::write_diagnostics_jsonl(t->t, out);
    });
}

void epr_trajectory_free(epr_trajectory* t) { delete t; }

epr_status epr_picard(const epr_system* s, const epr_shape* shape, double t_end, double dt,
                      int n_max, double tol, int threads, char** json_report,
                      epr_trajectory** out_final) {
    if (!s || !shape) return EPR_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        epr::PicardSpec spec;
        spec.t_end = t_end;
        spec.dt = dt;
        spec.n_max = n_max;
        spec.tol = tol;
        spec.threads = threads;
        epr::IterateStore store = epr::picard_iterate(s->v, shape->s, spec);
        if (json_report) *json_report = dup_string(epr::cauchy_report(store).to_json());
        if (out_final) {
            epr::Trajectory traj;
            traj.times = store.times;
            traj.states = store.iterates.back();
            traj.system = store.system;
            *out_final = new epr_trajectory{std::move(traj)};
        }
    });
}

epr_status epr_converge(double patch_radius, double patch_omega, double spacing,
                        double tracer_radius, int tracer_count, const char* profile,
                        const double* eps_list, int n_eps, double t_end, double dt,
                        int sample_every, int threads, int dt_check, char** json_report) {
    if (!profile || !eps_list || n_eps < 2 || !json_report) return EPR_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        epr::ConvergenceSpec spec;
        spec.patch = {patch_radius, patch_omega};
        spec.spacing = spacing;
        spec.tracer_radius = tracer_radius;
        spec.tracer_count = tracer_count;
        spec.profile = profile;
        spec.eps_list.assign(eps_list, eps_list + n_eps);
        spec.t_end = t_end;
        spec.dt = dt;
        spec.sample_every = sample_every;
        spec.threads = threads;
        spec.dt_check = dt_check != 0;
        *json_report = dup_string(epr::convergence_experiment(spec).to_json());
    });
}

} // extern "C"
