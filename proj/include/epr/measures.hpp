#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "epr/kernels.hpp"
#include "epr/vec2.hpp"

namespace epr {

/// Particle discretization of a vorticity measure: positions and the
/// circulations the atoms carry.  Circulations are never rescaled.
struct VortexSystem {
    std::vector<Vec2> positions;
    std::vector<double> circulations;
    std::string label;

    std::size_t size() const { return positions.size(); }
    double total_circulation() const;
};

/// Atomic measure sum Gamma_i delta_{x_i}.  Throws std::invalid_argument on
/// length mismatch or non-finite input.
VortexSystem point_vortices(std::vector<Vec2> positions, std::vector<double> circulations,
                            std::string label = "points");

struct BBox {
    Vec2 lo;
    Vec2 hi;
};

/// Midpoint-rule discretization of a bounded vorticity field: particles at
/// cell centers with Gamma_i = omega(x_i) * spacing^2.  Cells with
/// |omega| < drop_tol_rel * max|omega| are omitted.
VortexSystem discretize_patch(const std::function<double(Vec2)>& omega, const BBox& box,
                              double spacing, double drop_tol_rel = 1e-14);

/// Midpoint-rule discretization of a vortex sheet along a parametrized curve:
/// n particles at equal parameter increments, Gamma_i = strength(s_i) times
/// the chord length of the parameter sub-interval.
VortexSystem discretize_sheet(const std::function<Vec2(double)>& curve,
                              const std::function<double(double)>& strength, double s0, double s1,
                              int n);

struct DiagnosticsRecord {
    double circulation = 0.0;
    Vec2 impulse;
    double angular_impulse = 0.0;
    double hamiltonian = 0.0;
};

/// Conserved-quantity diagnostics: sum Gamma_i, sum Gamma_i x_i,
/// sum Gamma_i |x_i|^2 and the pairwise Hamiltonian
/// H = sum_{i<j} Gamma_i Gamma_j G_eps(|x_i - x_j|)  (self terms excluded).
DiagnosticsRecord diagnostics(std::span<const Vec2> positions, std::span<const double> circulations,
                              const ShapeTable& shape);
DiagnosticsRecord diagnostics(const VortexSystem& system, const ShapeTable& shape);

/// CSV serialization, header "x,y,gamma", full double precision.
void write_system_csv(const VortexSystem& system, std::ostream& out);
VortexSystem read_system_csv(std::istream& in, std::string label = "csv");

} // namespace epr
