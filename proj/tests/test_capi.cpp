// Exercises the shared-library surface end to end: handles, error codes and
// the serialized reports.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "eulerpoincare.h"

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

TEST_CASE("capi: version and scalar helpers") {
    CHECK(std::strcmp(epr_version(), EPR_VERSION_STRING) == 0);
    CHECK(epr_blob_shape(1.0) == 0.5);
    CHECK(epr_alpha_shape(0.0) == 0.0);
    CHECK(epr_quasi_lipschitz_modulus(2.0) == 1.0);

    double k0 = 0.0;
    REQUIRE(epr_bessel_k0(1.0, &k0) == EPR_OK);
    CHECK(k0 == doctest::Approx(0.42102443824070834).epsilon(1e-13));

    CHECK(epr_bessel_k0(-1.0, &k0) == EPR_ERR_DOMAIN);
    CHECK(std::strlen(epr_last_error()) > 0);

    double uv[2];
    CHECK(epr_singular_kernel(0.0, 0.0, uv) == EPR_ERR_DOMAIN);
    REQUIRE(epr_singular_kernel(1.0, 0.0, uv) == EPR_OK);
    CHECK(uv[1] == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-15));
}

TEST_CASE("capi: shapes, kernels and the L1 distance") {
    epr_shape* blob = nullptr;
    REQUIRE(epr_shape_builtin("blob", 1.0, &blob) == EPR_OK);
    CHECK(epr_shape_epsilon(blob) == 1.0);

    double uv[2];
    REQUIRE(epr_kernel_eval(blob, 0.0, 0.0, uv) == EPR_OK);
    CHECK(uv[0] == 0.0);
    CHECK(uv[1] == 0.0);
    REQUIRE(epr_kernel_eval(blob, 1.0, 0.0, uv) == EPR_OK);
    CHECK(uv[1] == doctest::Approx(1.0 / (4.0 * kPi)).epsilon(1e-14));

    double g = -1.0;
    REQUIRE(epr_shape_function(blob, 1.0, &g) == EPR_OK);
    CHECK(g == 0.5);

    double stream = 0.0;
    REQUIRE(epr_stream_eval(blob, 1.0, &stream) == EPR_OK);
    CHECK(stream == doctest::Approx(-std::log(std::sqrt(2.0)) / (2.0 * kPi)).epsilon(1e-14));

    double value = 0.0, bound = 0.0;
    REQUIRE(epr_l1_kernel_distance(blob, 1.0, &value, &bound) == EPR_OK);
    CHECK(value == doctest::Approx(kPi / 2.0).epsilon(1e-8));
    CHECK(bound == doctest::Approx(kPi / 2.0).epsilon(1e-12));

    CHECK(epr_shape_builtin("nope", 1.0, &blob) == EPR_ERR_INVALID_ARGUMENT);

    char* json = nullptr;
    REQUIRE(epr_verify_kernel_lemmas(blob, 2000, 7, &json) == EPR_OK);
    auto parsed = nlohmann::json::parse(json);
    CHECK(parsed.contains("decay_limit"));
    CHECK(parsed["quasi_lipschitz"]["pairs"] == 2000);
    epr_string_free(json);
    epr_shape_free(blob);
}

TEST_CASE("capi: generic shape built from a profile") {
    epr_profile* p = nullptr;
    REQUIRE(epr_profile_builtin("blob", &p) == EPR_OK);
    CHECK(epr_profile_first_radial_moment(p) == doctest::Approx(kPi / 2.0).epsilon(1e-12));
    epr_shape* tab = nullptr;
    REQUIRE(epr_shape_build(p, 1.0, 0, 0.0, &tab) == EPR_OK);
    double g = 0.0;
    REQUIRE(epr_shape_function(tab, 2.0, &g) == EPR_OK);
    CHECK(g == doctest::Approx(0.8).epsilon(1e-8));
    epr_shape* half = nullptr;
    REQUIRE(epr_shape_with_epsilon(tab, 0.5, &half) == EPR_OK);
    CHECK(epr_shape_epsilon(half) == 0.5);
    epr_shape_free(half);
    epr_shape_free(tab);
    epr_profile_free(p);
}

TEST_CASE("capi: systems, dynamics and trajectory output") {
    const double xy[4] = {-0.5, 0.0, 0.5, 0.0};
    const double gamma[2] = {2.0 * kPi, 2.0 * kPi};
    epr_system* pair = nullptr;
    REQUIRE(epr_system_points(xy, gamma, 2, &pair) == EPR_OK);
    CHECK(epr_system_size(pair) == 2);
    CHECK(epr_system_total_circulation(pair) == doctest::Approx(4.0 * kPi));

    epr_shape* blob = nullptr;
    REQUIRE(epr_shape_builtin("blob", 0.5, &blob) == EPR_OK);

    epr_diagnostics diag;
    REQUIRE(epr_system_diagnostics(pair, blob, &diag) == EPR_OK);
    CHECK(diag.circulation == doctest::Approx(4.0 * kPi));

    double uv[4];
    REQUIRE(epr_self_induced_velocity(pair, blob, 1, uv) == EPR_OK);
    CHECK(std::hypot(uv[2], uv[3]) == doctest::Approx(0.8).epsilon(1e-14));

    epr_trajectory* traj = nullptr;
    const double period = 5.0 * kPi / 4.0;
    REQUIRE(epr_evolve(pair, blob, period, 1e-3, 1 << 30, 2, 1, &traj) == EPR_OK);
    const int ns = epr_trajectory_samples(traj);
    REQUIRE(ns >= 2);
    std::vector<double> pos(2 * epr_trajectory_particles(traj));
    REQUIRE(epr_trajectory_positions(traj, ns - 1, pos.data()) == EPR_OK);
    CHECK(std::hypot(pos[0] - xy[0], pos[1] - xy[1]) < 1e-6);

    REQUIRE(epr_trajectory_write_csv(traj, "capi_traj_test.csv") == EPR_OK);
    std::ifstream in("capi_traj_test.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,particle_id,x,y");
    in.close();
    std::remove("capi_traj_test.csv");

    epr_trajectory_free(traj);
    epr_shape_free(blob);
    epr_system_free(pair);
}

TEST_CASE("capi: exact-kernel collision surfaces as a status code") {
    const double xy[4] = {0.0, 0.0, 0.0, 0.0};
    const double gamma[2] = {1.0, 1.0};
    epr_system* sys = nullptr;
    REQUIRE(epr_system_points(xy, gamma, 2, &sys) == EPR_OK);
    epr_shape* exact = nullptr;
    REQUIRE(epr_shape_builtin("exact", 0.0, &exact) == EPR_OK);
    double uv[4];
    CHECK(epr_self_induced_velocity(sys, exact, 1, uv) == EPR_ERR_COLLISION);
    epr_shape_free(exact);
    epr_system_free(sys);
}

TEST_CASE("capi: patch and sheet constructors") {
    auto disk = [](double x, double y, void*) -> double {
        return x * x + y * y <= 1.0 ? 1.0 : 0.0;
    };
    const double box[4] = {-1.05, -1.05, 1.05, 1.05};
    epr_system* patch = nullptr;
    REQUIRE(epr_system_patch(disk, nullptr, box, 0.05, &patch) == EPR_OK);
    CHECK(std::abs(epr_system_total_circulation(patch) - kPi) <= 0.1);
    epr_system_free(patch);

    auto seg = [](double s, void*, double out[2]) {
        out[0] = -1.0 + 2.0 * s;
        out[1] = 0.0;
    };
    auto unit = [](double, void*) -> double { return 1.0; };
    epr_system* sheet = nullptr;
    REQUIRE(epr_system_sheet(seg, nullptr, unit, nullptr, 0.0, 1.0, 4, &sheet) == EPR_OK);
    CHECK(epr_system_size(sheet) == 4);
    CHECK(epr_system_total_circulation(sheet) == doctest::Approx(2.0).epsilon(1e-14));
    epr_system_free(sheet);
}

TEST_CASE("capi: picard report JSON") {
    const double xy[4] = {-0.5, 0.0, 0.5, 0.0};
    const double gamma[2] = {2.0 * kPi, 2.0 * kPi};
    epr_system* pair = nullptr;
    REQUIRE(epr_system_points(xy, gamma, 2, &pair) == EPR_OK);
    epr_shape* blob = nullptr;
    REQUIRE(epr_shape_builtin("blob", 0.5, &blob) == EPR_OK);

    char* json = nullptr;
    epr_trajectory* final_it = nullptr;
    REQUIRE(epr_picard(pair, blob, 0.25, 1e-3, 20, 1e-6, 1, &json, &final_it) == EPR_OK);
    auto parsed = nlohmann::json::parse(json);
    CHECK(parsed["converged"] == true);
    CHECK(parsed["horizon"] == doctest::Approx(0.25));
    CHECK(parsed["iterations"].is_array());
    CHECK(parsed["iterations"][0].contains("rho"));
    CHECK(epr_trajectory_particles(final_it) == 2);

    epr_string_free(json);
    epr_trajectory_free(final_it);
    epr_shape_free(blob);
    epr_system_free(pair);
}

TEST_CASE("capi: convergence experiment report (coarse, fast)") {
    const double eps[2] = {0.4, 0.2};
    char* json = nullptr;
    REQUIRE(epr_converge(1.0, 1.0, 0.12, 2.0, 4, "blob", eps, 2, 0.25, 0.05, 5, 2, 0, &json) ==
            EPR_OK);
    auto parsed = nlohmann::json::parse(json);
    CHECK(parsed["monotone"] == true);
    CHECK(parsed["error"].size() == 2);
    CHECK(parsed["bound_exponent"] == doctest::Approx(std::exp(-0.25)));
    epr_string_free(json);
}
