#include <cmath>
#include <cstdint>
#include <cstring>
#include <sstream>

#include <doctest.h>

#include "epr/dynamics.hpp"
#include "epr/errors.hpp"

using namespace epr;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
const double kGamma = 2.0 * kPi;

// deterministic scatter of particles for property checks
VortexSystem random_cloud(int n, std::uint64_t seed) {
    std::vector<Vec2> pos;
    std::vector<double> circ;
    std::uint64_t s = seed;
    auto next = [&s] {
        std::uint64_t z = (s += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return static_cast<double>((z ^ (z >> 31)) >> 11) * 0x1.0p-53;
    };
    for (int i = 0; i < n; ++i) {
        pos.push_back({4.0 * next() - 2.0, 4.0 * next() - 2.0});
        circ.push_back(2.0 * next() - 0.5);
    }
    return point_vortices(std::move(pos), std::move(circ), "cloud");
}
} // namespace

TEST_CASE("induced_velocity: single vortex examples") {
    const VortexSystem one = point_vortices({{0.0, 0.0}}, {kGamma});
    const Vec2 target{1.0, 0.0};

    const auto u_exact = induced_velocity(one, std::vector<Vec2>{target}, make_shape("exact", 0.0));
    CHECK(u_exact[0].x == doctest::Approx(0.0));
    CHECK(u_exact[0].y == doctest::Approx(1.0).epsilon(1e-14));

    const auto u_blob = induced_velocity(one, std::vector<Vec2>{target}, make_shape("blob", 1.0));
    CHECK(u_blob[0].y == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("induced_velocity: mutual induction of the co-rotating pair") {
    const VortexSystem pair = point_vortices({{-0.5, 0.0}, {0.5, 0.0}}, {kGamma, kGamma});
    const auto u = self_induced_velocity(pair, make_shape("blob", 0.5));
    // speed = S(d/eps)/d = S(2) = 0.8
    CHECK(norm(u[1]) == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(norm(u[0]) == doctest::Approx(0.8).epsilon(1e-14));
}

TEST_CASE("induced_velocity: exact kernel collision raises") {
    const VortexSystem pair = point_vortices({{0.0, 0.0}, {0.0, 0.0}}, {1.0, 1.0});
    CHECK_THROWS_AS(self_induced_velocity(pair, make_shape("exact", 0.0)), CollisionError);
    // regularized kernels treat coincident particles as zero contribution
    const auto u = self_induced_velocity(pair, make_shape("blob", 0.5));
    CHECK(u[0].x == 0.0);
    CHECK(u[0].y == 0.0);
}

TEST_CASE("induced_velocity: deterministic across thread counts") {
    const VortexSystem cloud = random_cloud(150, 17);
    std::vector<Vec2> targets = cloud.positions;
    targets.push_back({0.0, 0.0});
    const ShapeTable shape = make_shape("blob", 0.3);
    const auto u1 = induced_velocity(cloud, targets, shape, 1);
    const auto u2 = induced_velocity(cloud, targets, shape, 2);
    const auto u8 = induced_velocity(cloud, targets, shape, 8);
    REQUIRE(u1.size() == u2.size());
    for (std::size_t i = 0; i < u1.size(); ++i) {
        CHECK(u1[i].x == u2[i].x);
        CHECK(u1[i].y == u2[i].y);
        CHECK(u1[i].x == u8[i].x);
        CHECK(u1[i].y == u8[i].y);
    }
}

TEST_CASE("induced_velocity: impulse balance of the self-interaction sums") {
    for (const char* name : {"blob", "alpha"}) {
        const VortexSystem cloud = random_cloud(60, 3);
        const ShapeTable shape = make_shape(name, 0.4);
        const auto u = self_induced_velocity(cloud, shape);

        double max_k = 0.0, sum_g2 = 0.0;
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            sum_g2 += cloud.circulations[i] * cloud.circulations[i];
            for (std::size_t j = 0; j < cloud.size(); ++j)
                if (i != j)
                    max_k = std::max(max_k,
                                     norm(shape.kernel(cloud.positions[i] - cloud.positions[j])));
        }
        const double scale = sum_g2 * max_k;

        Vec2 linear{0.0, 0.0};
        double angular = 0.0;
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            linear += cloud.circulations[i] * u[i];
            angular += cloud.circulations[i] * dot(cloud.positions[i], u[i]);
        }
        CHECK(norm(linear) <= 1e-12 * scale);
        CHECK(std::abs(angular) <= 1e-12 * scale);
    }
}

TEST_CASE("evolve: a single vortex is stationary") {
    const VortexSystem one = point_vortices({{0.7, -1.3}}, {kGamma});
    const Trajectory tr = evolve(one, make_shape("blob", 0.5), 1.0, 0.01, 10);
    for (const auto& st : tr.states) {
        CHECK(st[0].x == 0.7);
        CHECK(st[0].y == -1.3);
    }
}

TEST_CASE("evolve: co-rotating pair returns after one period") {
    const VortexSystem pair = point_vortices({{-0.5, 0.0}, {0.5, 0.0}}, {kGamma, kGamma});

    SUBCASE("exact kernel, period pi") {
        const Trajectory tr = evolve(pair, make_shape("exact", 0.0), kPi, 1e-3, 1 << 30, 1, false);
        for (int i = 0; i < 2; ++i)
            CHECK(norm(tr.states.back()[i] - pair.positions[i]) < 1e-6);
    }
    SUBCASE("blob delta = 0.5, period 5 pi / 4") {
        const Trajectory tr =
            evolve(pair, make_shape("blob", 0.5), 5.0 * kPi / 4.0, 1e-3, 1 << 30, 1, false);
        for (int i = 0; i < 2; ++i)
            CHECK(norm(tr.states.back()[i] - pair.positions[i]) < 1e-6);
    }
}

TEST_CASE("evolve: circulations are never rewritten") {
    const VortexSystem pair = point_vortices({{-0.5, 0.0}, {0.5, 0.0}}, {kGamma, 0.5 * kGamma});
    const Trajectory tr = evolve(pair, make_shape("blob", 0.5), 0.5, 1e-2, 5);
    REQUIRE(tr.system.circulations.size() == 2);
    CHECK(std::memcmp(tr.system.circulations.data(), pair.circulations.data(),
                      2 * sizeof(double)) == 0);
    for (const auto& d : tr.diagnostics)
        CHECK(d.circulation == tr.diagnostics.front().circulation);
}

TEST_CASE("evolve: Hamiltonian drift shrinks by about 16x when dt halves") {
    const VortexSystem pair = point_vortices({{-0.5, 0.0}, {0.5, 0.0}}, {kGamma, kGamma});
    const ShapeTable shape = make_shape("blob", 0.5);
    const double period = 5.0 * kPi / 4.0;
    auto drift = [&](double dt) {
        const Trajectory tr = evolve(pair, shape, period, dt, 1 << 30);
        return std::abs(tr.diagnostics.back().hamiltonian - tr.diagnostics.front().hamiltonian);
    };
    const double ratio = drift(0.1) / drift(0.05);
    CHECK(ratio >= 8.0);
    CHECK(ratio <= 32.0);
}

TEST_CASE("passive_tracers: circular orbit around a single vortex") {
    const VortexSystem one = point_vortices({{0.0, 0.0}}, {kGamma});
    // tracer at radius 2: speed 1/2, period 8 pi
    const std::vector<Vec2> tracer = {{2.0, 0.0}};
    const AdvectResult res =
        passive_tracers(one, tracer, make_shape("exact", 0.0), 8.0 * kPi, 1e-3, 1 << 30, 1, false);
    CHECK(norm(res.tracers.states.back()[0] - tracer[0]) < 1e-5);
    CHECK(res.tracers.system.circulations[0] == 0.0);
}

TEST_CASE("passive_tracers: symmetry axis is invariant") {
    const VortexSystem pair = point_vortices({{-0.5, 0.0}, {0.5, 0.0}}, {kGamma, kGamma});
    const std::vector<Vec2> tracer = {{0.0, 0.0}};
    const AdvectResult res =
        passive_tracers(pair, tracer, make_shape("blob", 0.5), 1.0, 1e-2, 10, 1, false);
    for (const auto& st : res.tracers.states) CHECK(norm(st[0]) < 1e-14);
}

TEST_CASE("passive_tracers: far-field drift is bounded by the kernel decay") {
    const VortexSystem pair = point_vortices({{-0.5, 0.0}, {0.5, 0.0}}, {kGamma, kGamma});
    const std::vector<Vec2> tracer = {{1e6, 0.0}};
    const AdvectResult res =
        passive_tracers(pair, tracer, make_shape("blob", 0.5), 1.0, 0.05, 1 << 30, 1, false);
    CHECK(norm(res.tracers.states.back()[0] - tracer[0]) < 1e-5);
}

TEST_CASE("evolve: a symmetric ring rotates rigidly, radii constant") {
    // one ring of equal vortices: the reflection symmetry through each
    // particle's radius persists for all time, so the velocity at every
    // particle is azimuthal (distinct rings would de-align and breathe)
    std::vector<Vec2> pos;
    std::vector<double> circ;
    for (int k = 0; k < 32; ++k) {
        const double th = 2.0 * kPi * k / 32;
        pos.push_back({0.7 * std::cos(th), 0.7 * std::sin(th)});
        circ.push_back(0.1);
    }
    const VortexSystem ring = point_vortices(pos, circ, "ring");
    const Trajectory tr = evolve(ring, make_shape("blob", 0.3), 1.0, 1e-3, 1 << 30, 2, false);
    double worst = 0.0;
    for (std::size_t i = 0; i < ring.size(); ++i)
        worst = std::max(worst,
                         std::abs(norm(tr.states.back()[i]) - norm(ring.positions[i])));
    CHECK(worst < 1e-8);
}

TEST_CASE("evolve: empty system is a no-op") {
    const VortexSystem empty = point_vortices({}, {});
    const Trajectory tr = evolve(empty, make_shape("blob", 1.0), 0.1, 0.05, 1);
    CHECK(tr.particles() == 0);
    CHECK(tr.samples() >= 2);
    for (const auto& d : tr.diagnostics) CHECK(d.circulation == 0.0);
}

TEST_CASE("trajectory writers: stable row format") {
    const VortexSystem one = point_vortices({{1.0 / 3.0, -0.25}}, {kGamma});
    const Trajectory tr = evolve(one, make_shape("blob", 1.0), 0.1, 0.05, 1);
    std::stringstream csv;
    write_trajectory_csv(tr, csv);
    std::string line;
    std::getline(csv, line);
    CHECK(line == "t,particle_id,x,y");
    std::getline(csv, line);
    CHECK(line == "0,0,0.33333333333333331,-0.25");

    std::stringstream jl;
    write_diagnostics_jsonl(tr, jl);
    std::getline(jl, line);
    CHECK(line.find("\"t\": 0") != std::string::npos);
    CHECK(line.find("\"hamiltonian\":") != std::string::npos);
}
