#include <cmath>

#include <doctest.h>

#include "epr/dynamics.hpp"
#include "epr/picard.hpp"

using namespace epr;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
const double kGamma = 2.0 * kPi;

PicardSpec pair_spec(double t_end) {
    PicardSpec spec;
    spec.t_end = t_end;
    spec.dt = 1e-3;
    spec.n_max = 20;
    spec.tol = 1e-6;
    return spec;
}
} // namespace

TEST_CASE("picard: single vortex converges immediately with rho = 0") {
    const VortexSystem one = point_vortices({{0.3, 0.4}}, {kGamma});
    const IterateStore st = picard_iterate(one, make_shape("blob", 0.5), pair_spec(0.5));
    REQUIRE(st.rho.size() == 1);
    CHECK(st.rho[0] == 0.0);
    CHECK(st.converged);
    const CauchyReport rep = cauchy_report(st);
    CHECK(rep.rows[0].rho == 0.0);
}

TEST_CASE("picard: eta^0 is the identity on the particle set") {
    const VortexSystem pair = point_vortices({{-0.5, 0.0}, {0.5, 0.0}}, {kGamma, kGamma});
    const IterateStore st = picard_iterate(pair, make_shape("blob", 0.5), pair_spec(0.25));
    for (const auto& sample : st.iterates[0])
        for (std::size_t i = 0; i < pair.size(); ++i) {
            CHECK(sample[i].x == pair.positions[i].x);
            CHECK(sample[i].y == pair.positions[i].y);
        }
}

TEST_CASE("picard: co-rotating pair contracts and matches the direct solver") {
    const VortexSystem pair = point_vortices({{-0.5, 0.0}, {0.5, 0.0}}, {kGamma, kGamma});
    const ShapeTable shape = make_shape("blob", 0.5);
    const PicardSpec spec = pair_spec(0.5);
    const IterateStore st = picard_iterate(pair, shape, spec);

    CHECK(st.converged);
    CHECK(!st.bisected);
    CHECK(st.rho.size() <= 20);
    for (std::size_t i = 2; i < st.rho.size(); ++i) CHECK(st.rho[i] <= st.rho[i - 1]);

    const Trajectory direct = evolve(pair, shape, st.horizon, spec.dt, 1, 1, false);
    REQUIRE(direct.samples() == st.times.size());
    double sup = 0.0;
    for (std::size_t s = 0; s < st.times.size(); ++s)
        for (std::size_t i = 0; i < pair.size(); ++i)
            sup = std::max(sup, norm(direct.states[s][i] - st.iterates.back()[s][i]));
    CHECK(sup < 1e-4);
    CHECK(sup < 10.0 * spec.tol);
}

TEST_CASE("picard: first iterate is the flow of the frozen initial field") {
    const VortexSystem pair = point_vortices({{-0.5, 0.0}, {0.5, 0.0}}, {kGamma, kGamma});
    const ShapeTable shape = make_shape("blob", 0.5);
    PicardSpec spec = pair_spec(0.25);
    spec.n_max = 1;
    const IterateStore st = picard_iterate(pair, shape, spec);
    REQUIRE(st.iterates.size() == 2);

    // reference: RK4 under the steady field of the frozen initial vortices
    std::vector<Vec2> x = pair.positions;
    const long long n = std::llround(st.horizon / spec.dt);
    const double dt = st.horizon / n;
    std::vector<Vec2> k1, k2, k3, k4;
    for (long long s = 0; s < n; ++s) {
        auto vel = [&](const std::vector<Vec2>& p) {
            return induced_velocity(pair, p, shape, 1);
        };
        k1 = vel(x);
        std::vector<Vec2> tmp(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) tmp[i] = x[i] + (0.5 * dt) * k1[i];
        k2 = vel(tmp);
        for (std::size_t i = 0; i < x.size(); ++i) tmp[i] = x[i] + (0.5 * dt) * k2[i];
        k3 = vel(tmp);
        for (std::size_t i = 0; i < x.size(); ++i) tmp[i] = x[i] + dt * k3[i];
        k4 = vel(tmp);
        for (std::size_t i = 0; i < x.size(); ++i)
            x[i] += (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(norm(st.iterates[1].back()[i] - x[i]) < 1e-12);
}

TEST_CASE("picard: stronger contraction at a short horizon") {
    const VortexSystem pair = point_vortices({{-0.5, 0.0}, {0.5, 0.0}}, {kGamma, kGamma});
    PicardSpec spec = pair_spec(0.01);
    spec.tol = 1e-14;
    spec.n_max = 4;
    const IterateStore st = picard_iterate(pair, make_shape("blob", 0.5), spec);
    REQUIRE(st.rho.size() >= 2);
    CHECK(st.rho[1] / st.rho[0] < 0.1);
}

TEST_CASE("picard: circulations are untouched across iterations") {
    const VortexSystem pair = point_vortices({{-0.5, 0.0}, {0.5, 0.0}}, {kGamma, 0.3});
    const IterateStore st = picard_iterate(pair, make_shape("blob", 0.5), pair_spec(0.2));
    CHECK(st.system.circulations[0] == pair.circulations[0]);
    CHECK(st.system.circulations[1] == pair.circulations[1]);
}

TEST_CASE("picard: horizon beyond the contraction window is bisected once") {
    const VortexSystem pair = point_vortices({{-0.5, 0.0}, {0.5, 0.0}}, {kGamma, kGamma});
    PicardSpec spec;
    spec.t_end = 10.0;
    spec.dt = 0.01;
    spec.n_max = 15;
    spec.tol = 1e-8;
    const IterateStore st = picard_iterate(pair, make_shape("blob", 0.5), spec);
    CHECK(st.bisected);
    CHECK(st.horizon == doctest::Approx(5.0));
    CHECK(!st.converged);
}

TEST_CASE("cauchy_report: ratios below one after the first iteration") {
    const VortexSystem pair = point_vortices({{-0.5, 0.0}, {0.5, 0.0}}, {kGamma, kGamma});
    const IterateStore st = picard_iterate(pair, make_shape("blob", 0.5), pair_spec(0.5));
    const CauchyReport rep = cauchy_report(st);
    REQUIRE(rep.rows.size() >= 3);
    CHECK(std::isnan(rep.rows[0].ratio));
    for (std::size_t i = 2; i < rep.rows.size(); ++i) CHECK(rep.rows[i].ratio < 1.0);
    CHECK(rep.converged);
    CHECK(rep.horizon == doctest::Approx(0.5));
    const std::string json = rep.to_json();
    CHECK(json.find("\"iterations\"") != std::string::npos);
    CHECK(json.find("\"horizon\"") != std::string::npos);
    CHECK(json.find("\"converged\"") != std::string::npos);
}
