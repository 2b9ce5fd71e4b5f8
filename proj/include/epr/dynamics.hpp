#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "epr/kernels.hpp"
#include "epr/measures.hpp"
#include "epr/vec2.hpp"

namespace epr {

/// Time-sampled flow map of a particle set.  Circulations live in `system`
/// and are never written after construction.
struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<Vec2>> states;  // one position array per sample
    VortexSystem system;
    std::vector<DiagnosticsRecord> diagnostics;  // empty when not recorded

    std::size_t samples() const { return times.size(); }
    std::size_t particles() const { return system.size(); }
};

/// Velocity induced by the sources at arbitrary target points:
/// u_i = sum_j Gamma_j K_h(target_i - x_j), summed in index order with a
/// blocked reduction so results are identical across thread counts.
/// Exact kernel at zero separation raises CollisionError.
std::vector<Vec2> induced_velocity(const VortexSystem& sources, std::span<const Vec2> targets,
                                   const ShapeTable& shape, int threads = 1);

/// Velocity of the sources at their own positions; the i == j term is
/// skipped by index.
std::vector<Vec2> self_induced_velocity(const VortexSystem& sources, const ShapeTable& shape,
                                        int threads = 1);

/// RK4 integration of the self-consistent N-body flow.  The trajectory is
/// sampled every `sample_every` steps (plus the initial and final states);
/// diagnostics are recorded at each sample unless disabled.
Trajectory evolve(const VortexSystem& system, const ShapeTable& shape, double t_end, double dt,
                  int sample_every = 1, int threads = 1, bool with_diagnostics = true);

struct AdvectResult {
    Trajectory sources;
    Trajectory tracers;  // zero-circulation particles, no feedback on sources
};

/// Co-evolves the source system and passive tracers advected by its velocity.
AdvectResult passive_tracers(const VortexSystem& system, std::span<const Vec2> tracers,
                             const ShapeTable& shape, double t_end, double dt,
                             int sample_every = 1, int threads = 1,
                             bool with_diagnostics = true);

/// Radially symmetric constant-vorticity patch (steady for exact and
/// regularized dynamics; closed-form azimuthal velocity).
struct RankinePatch {
    double radius = 1.0;
    double omega = 1.0;
};

struct ConvergenceSpec {
    RankinePatch patch;
    double spacing = 0.03;
    double tracer_radius = 2.0;
    int tracer_count = 16;
    std::string profile = "blob";
    std::vector<double> eps_list = {0.4, 0.2, 0.1};
    double t_end = 1.0;
    double dt = 0.02;
    int sample_every = 5;
    int threads = 1;
    bool dt_check = true;  // rerun the smallest eps at dt/2
};

struct ConvergenceResult {
    std::vector<double> eps;
    std::vector<double> error;       // sup over samples and tracers vs the exact flow
    double fitted_order = 0.0;    // least-squares slope of log E vs log eps
    double bound_exponent = 0.0;  // exp(-t_end); the error bound scales as eps to this power
    bool monotone = false;           // E strictly decreasing along eps_list
    double dt_check_eps = 0.0;
    double dt_check_error = 0.0;     // E at dt/2
    double dt_check_rel_change = 0.0;
    int particles = 0;
    double spacing = 0.0;
    double t_end = 0.0;
    double dt = 0.0;

    std::string to_json() const;
};

/// Convergence-rate experiment: tracers on a ring around a discretized
/// Rankine patch, integrated with a family of regularized kernels and
/// compared against the closed-form exact-Euler tracer orbits.  The fitted
/// order is reported next to the upper-bound exponent exp(-T); a
/// non-monotone error sequence is flagged (dt or spacing dominating).
ConvergenceResult convergence_experiment(const ConvergenceSpec& spec);

/// Trajectory CSV: "t,particle_id,x,y", one row per sample and particle,
/// 17 significant digits.
void write_trajectory_csv(const Trajectory& traj, std::ostream& out);

/// Diagnostics stream, one JSON object per sample:
/// {t, circulation, impulse_x, impulse_y, angular_impulse, hamiltonian}.
void write_diagnostics_jsonl(const Trajectory& traj, std::ostream& out);

} // namespace epr
