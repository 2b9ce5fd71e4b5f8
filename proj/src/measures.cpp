#include "epr/measures.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace epr {

double VortexSystem::total_circulation() const {
    double sum = 0.0;
    for (double g : circulations) sum += g;
    return sum;
}

VortexSystem point_vortices(std::vector<Vec2> positions, std::vector<double> circulations,
                            std::string label) {
    if (positions.size() != circulations.size())
        throw std::invalid_argument("point_vortices: positions/circulations length mismatch");
    for (const Vec2& p : positions)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw std::invalid_argument("point_vortices: non-finite position");
    for (double g : circulations)
        if (!std::isfinite(g)) throw std::invalid_argument("point_vortices: non-finite circulation");
    return {std::move(positions), std::move(circulations), std::move(label)};
}

VortexSystem discretize_patch(const std::function<double(Vec2)>& omega, const BBox& box,
                              double spacing, double drop_tol_rel) {
    if (!(spacing > 0.0)) throw std::invalid_argument("discretize_patch: spacing must be > 0");
    if (!(box.hi.x > box.lo.x) || !(box.hi.y > box.lo.y))
        throw std::invalid_argument("discretize_patch: empty bounding box");

    const int nx = static_cast<int>(std::ceil((box.hi.x - box.lo.x) / spacing - 1e-12));
    const int ny = static_cast<int>(std::ceil((box.hi.y - box.lo.y) / spacing - 1e-12));

    std::vector<Vec2> centers;
    std::vector<double> w;
    centers.reserve(static_cast<std::size_t>(nx) * ny);
    double w_max = 0.0;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const Vec2 c{box.lo.x + (i + 0.5) * spacing, box.lo.y + (j + 0.5) * spacing};
            const double v = omega(c);
            centers.push_back(c);
            w.push_back(v);
            w_max = std::max(w_max, std::abs(v));
        }
    }

    VortexSystem sys;
    sys.label = "patch";
    const double cell = spacing * spacing;
    const double drop = drop_tol_rel * w_max;
    for (std::size_t k = 0; k < centers.size(); ++k) {
        if (std::abs(w[k]) < drop || w[k] == 0.0) continue;
        sys.positions.push_back(centers[k]);
        sys.circulations.push_back(w[k] * cell);
    }
    return sys;
}

VortexSystem discretize_sheet(const std::function<Vec2(double)>& curve,
                              const std::function<double(double)>& strength, double s0, double s1,
                              int n) {
    if (n < 2) throw std::invalid_argument("discretize_sheet: need n >= 2");
    if (!(s1 > s0)) throw std::invalid_argument("discretize_sheet: empty parameter interval");

    const double ds = (s1 - s0) / n;
    VortexSystem sys;
    sys.label = "sheet";
    double total_length = 0.0;
    for (int i = 0; i < n; ++i) {
        const double sm = s0 + (i + 0.5) * ds;
        const Vec2 a = curve(sm - 0.5 * ds);
        const Vec2 b = curve(sm + 0.5 * ds);
        const double chord = norm(b - a);
        total_length += chord;
        sys.positions.push_back(curve(sm));
        sys.circulations.push_back(strength(sm) * chord);
    }
    if (total_length == 0.0) throw std::invalid_argument("discretize_sheet: degenerate curve");
    return sys;
}

DiagnosticsRecord diagnostics(std::span<const Vec2> positions, std::span<const double> circulations,
                              const ShapeTable& shape) {
    DiagnosticsRecord rec;
    const std::size_t n = positions.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double g = circulations[i];
        rec.circulation += g;
        rec.impulse += g * positions[i];
        rec.angular_impulse += g * norm2(positions[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double r = norm(positions[i] - positions[j]);
            rec.hamiltonian += circulations[i] * circulations[j] * shape.stream(r);
        }
    }
    return rec;
}

DiagnosticsRecord diagnostics(const VortexSystem& system, const ShapeTable& shape) {
    return diagnostics(system.positions, system.circulations, shape);
}

namespace {
void put17(std::ostream& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
}
} // namespace

void write_system_csv(const VortexSystem& system, std::ostream& out) {
    out << "x,y,gamma\n";
    for (std::size_t i = 0; i < system.size(); ++i) {
        put17(out, system.positions[i].x);
        out << ',';
        put17(out, system.positions[i].y);
        out << ',';
        put17(out, system.circulations[i]);
        out << '\n';
    }
}

VortexSystem read_system_csv(std::istream& in, std::string label) {
    VortexSystem sys;
    sys.label = std::move(label);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::string tmp = line;
        for (char& c : tmp)
            if (c == ',') c = ' ';
        std::istringstream row(tmp);
        double x, y, g;
        if (!(row >> x >> y >> g)) continue;  // header
        sys.positions.push_back({x, y});
        sys.circulations.push_back(g);
    }
    return sys;
}

} // namespace epr
