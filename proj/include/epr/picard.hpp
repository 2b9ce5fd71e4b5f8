#pragma once

#include <string>
#include <vector>

#include "epr/kernels.hpp"
#include "epr/measures.hpp"
#include "epr/vec2.hpp"

namespace epr {

/// Successive flow-map iterates on a shared time grid.  iterates[0] is the
/// identity map (frozen initial positions); iterates[n] solves the flow of
/// the velocity field induced by iterate n-1.
struct IterateStore {
    std::vector<double> times;
    std::vector<std::vector<std::vector<Vec2>>> iterates;  // [iter][sample][particle]
    std::vector<double> rho;  // rho[n-1] = max_{samples,particles} |eta^n - eta^(n-1)|
    double horizon = 0.0;     // t_end actually used (may be bisected once)
    bool converged = false;
    bool bisected = false;
    VortexSystem system;
};

struct PicardSpec {
    double t_end = 0.5;
    double dt = 1e-3;
    int n_max = 20;
    double tol = 1e-8;
    int threads = 1;
};

/// Fixed-point iteration for the particle flow: iteration n integrates, by
/// RK4, d/dt eta^n(x_i) = sum_j Gamma_j K_h(eta^n(x_i) - eta^(n-1)(x_j, t))
/// with the previous iterate read from storage (linear in time between
/// steps).  Stops at rho^n < tol or n == n_max.  If rho fails to decrease
/// over three consecutive iterations the horizon is bisected once and the
/// iteration restarted; the working horizon is reported in the store.
IterateStore picard_iterate(const VortexSystem& system, const ShapeTable& shape,
                            const PicardSpec& spec);

struct CauchyReport {
    struct Row {
        int n = 0;
        double rho = 0.0;
        double ratio = 0.0;  // rho^n / rho^(n-1); NaN for n = 1
    };
    std::vector<Row> rows;
    double horizon = 0.0;
    bool converged = false;

    std::string to_json() const;
};

/// Per-iteration Cauchy gaps and their ratios.
CauchyReport cauchy_report(const IterateStore& store);

} // namespace epr
