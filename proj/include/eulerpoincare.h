/* eulerpoincare: regularized 2D vortex dynamics.
 *
 * C interface to the library: opaque handles, integer status codes, and a
 * thread-local error message.  Every function that can fail returns
 * epr_status; out-parameters are written only on EPR_OK.  Strings returned
 * through char** out-parameters are heap-allocated and must be released
 * with epr_string_free.
 */
#ifndef EULERPOINCARE_H
#define EULERPOINCARE_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#define EPR_VERSION_STRING "0.1.0"

typedef enum epr_status {
    EPR_OK = 0,
    EPR_ERR_INVALID_ARGUMENT = 1,
    EPR_ERR_DOMAIN = 2,           /* e.g. Bessel functions at x <= 0 */
    EPR_ERR_QUADRATURE = 3,       /* adaptive integration did not converge */
    EPR_ERR_NOT_NORMALIZED = 4,   /* profile radial mass deviates from 1 */
    EPR_ERR_COLLISION = 5,        /* exact kernel at zero separation */
    EPR_ERR_IO = 6,
    EPR_ERR_INTERNAL = 7
} epr_status;

typedef struct epr_profile epr_profile;       /* radial smoothing profile */
typedef struct epr_shape epr_shape;           /* regularized kernel */
typedef struct epr_system epr_system;         /* vortex particles */
typedef struct epr_trajectory epr_trajectory; /* time-sampled flow map */

const char* epr_version(void);
/* Message for the most recent failure on this thread ("" if none). */
const char* epr_last_error(void);
void epr_string_free(char* s);

/* ---- special functions and closed forms ---- */

epr_status epr_bessel_k0(double x, double* out);
epr_status epr_bessel_k1(double x, double* out);
double epr_blob_shape(double r);
double epr_alpha_shape(double r);
double epr_quasi_lipschitz_modulus(double r);
/* K(x) = -(1/2pi) x_perp/|x|^2; EPR_ERR_DOMAIN at x = 0. */
epr_status epr_singular_kernel(double x, double y, double out_uv[2]);

/* ---- smoothing profiles ---- */

/* name: "blob" or "alpha" */
epr_status epr_profile_builtin(const char* name, epr_profile** out);
/* two-column CSV (k, h(k)); radial mass checked against 1 at load */
epr_status epr_profile_from_csv(const char* path, epr_profile** out);
double epr_profile_first_radial_moment(const epr_profile* p);
void epr_profile_free(epr_profile* p);

/* ---- shapes (regularized kernels) ---- */

/* name: "blob", "alpha" or "exact"; epsilon ignored for "exact" */
epr_status epr_shape_builtin(const char* name, double epsilon, epr_shape** out);
/* generic quadrature-built table; nodes <= 0 or r_max <= 0 pick defaults */
epr_status epr_shape_build(const epr_profile* p, double epsilon, int nodes, double r_max,
                           epr_shape** out);
epr_status epr_shape_with_epsilon(const epr_shape* s, double epsilon, epr_shape** out);
double epr_shape_epsilon(const epr_shape* s);
/* shape function S(s) at scaled radius s = r/epsilon */
epr_status epr_shape_function(const epr_shape* s, double scaled_r, double* out);
/* K_h(x); exactly (0,0) at the origin */
epr_status epr_kernel_eval(const epr_shape* s, double x, double y, double out_uv[2]);
/* radial stream function G_eps(r) */
epr_status epr_stream_eval(const epr_shape* s, double r, double* out);
/* L1 distance between K_eps and K, and the first-moment bound */
epr_status epr_l1_kernel_distance(const epr_shape* s, double epsilon, double* value,
                                  double* bound);
/* kernel estimate checks (boundedness, decay, quasi-Lipschitz constant);
 * returns a JSON report */
epr_status epr_verify_kernel_lemmas(const epr_shape* s, int pairs, unsigned long long seed,
                                    char** json_out);
void epr_shape_free(epr_shape* s);

/* ---- vorticity measures ---- */

/* xy: n pairs (x0,y0,x1,y1,...) */
epr_status epr_system_points(const double* xy, const double* gamma, int n, epr_system** out);

typedef double (*epr_scalar_field)(double x, double y, void* ctx);
epr_status epr_system_patch(epr_scalar_field omega, void* ctx, const double bbox_ltrb[4],
                            double spacing, epr_system** out);

typedef void (*epr_curve_fn)(double s, void* ctx, double out_xy[2]);
typedef double (*epr_density_fn)(double s, void* ctx);
epr_status epr_system_sheet(epr_curve_fn curve, void* curve_ctx, epr_density_fn strength,
                            void* strength_ctx, double s0, double s1, int n, epr_system** out);

int epr_system_size(const epr_system* s);
double epr_system_total_circulation(const epr_system* s);
/* fill caller buffers: xy of length 2n, gamma of length n (either may be NULL) */
epr_status epr_system_get(const epr_system* s, double* xy, double* gamma);
epr_status epr_system_write_csv(const epr_system* s, const char* path);
epr_status epr_system_read_csv(const char* path, epr_system** out);
void epr_system_free(epr_system* s);

typedef struct epr_diagnostics {
    double circulation;
    double impulse_x;
    double impulse_y;
    double angular_impulse;
    double hamiltonian;
} epr_diagnostics;

epr_status epr_system_diagnostics(const epr_system* s, const epr_shape* shape,
                                  epr_diagnostics* out);

/* ---- dynamics ---- */

/* u_i = sum_j Gamma_j K_h(target_i - x_j); deterministic across thread counts */
epr_status epr_induced_velocity(const epr_system* sources, const epr_shape* shape,
                                const double* targets_xy, int n_targets, int threads,
                                double* out_uv);
/* velocity of the sources at their own positions (i == j skipped) */
epr_status epr_self_induced_velocity(const epr_system* sources, const epr_shape* shape,
                                     int threads, double* out_uv);

epr_status epr_evolve(const epr_system* s, const epr_shape* shape, double t_end, double dt,
                      int sample_every, int threads, int with_diagnostics, epr_trajectory** out);
/* co-evolve sources and passive tracers; either out pointer may be NULL */
epr_status epr_passive_tracers(const epr_system* s, const epr_shape* shape,
                               const double* tracers_xy, int n_tracers, double t_end, double dt,
                               int sample_every, int threads, int with_diagnostics,
                               epr_trajectory** out_sources, epr_trajectory** out_tracers);

int epr_trajectory_samples(const epr_trajectory* t);
int epr_trajectory_particles(const epr_trajectory* t);
epr_status epr_trajectory_times(const epr_trajectory* t, double* out);
/* positions of one sample: xy of length 2 * particles */
epr_status epr_trajectory_positions(const epr_trajectory* t, int sample, double* xy);
epr_status epr_trajectory_diagnostics(const epr_trajectory* t, int sample, epr_diagnostics* out);
/* CSV "t,particle_id,x,y", 17 significant digits */
epr_status epr_trajectory_write_csv(const epr_trajectory* t, const char* path);
/* JSONL: {t, circulation, impulse_x, impulse_y, angular_impulse, hamiltonian} */
epr_status epr_trajectory_write_diagnostics_jsonl(const epr_trajectory* t, const char* path);
void epr_trajectory_free(epr_trajectory* t);

/* ---- Picard iteration ---- */

/* Successive flow-map iterates driven by the previous iterate's transported
 * vorticity.  Writes the JSON report {iterations:[{n,rho,ratio}], horizon,
 * converged}; optionally returns the final iterate as a trajectory. */
epr_status epr_picard(const epr_system* s, const epr_shape* shape, double t_end, double dt,
                      int n_max, double tol, int threads, char** json_report,
                      epr_trajectory** out_final);

/* ---- convergence experiment ---- */

/* Tracer ring around a discretized constant-vorticity disk, integrated for a
 * decreasing list of regularization lengths and compared against the
 * closed-form exact-Euler orbits.  Writes a JSON report with the error per
 * eps, the fitted order and the exp(-T) reference exponent. */
epr_status epr_converge(double patch_radius, double patch_omega, double spacing,
                        double tracer_radius, int tracer_count, const char* profile,
                        const double* eps_list, int n_eps, double t_end, double dt,
                        int sample_every, int threads, int dt_check, char** json_report);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* EULERPOINCARE_H */
