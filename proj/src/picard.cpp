#include "epr/picard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "epr/dynamics.hpp"
#include "epr/errors.hpp"

namespace epr {

namespace {

// Positions of the previous iterate at an arbitrary time, linear between the
// stored step samples.
void interp_positions(const std::vector<double>& times,
                      const std::vector<std::vector<Vec2>>& states, double t,
                      std::vector<Vec2>& out) {
    const std::size_t s = times.size();
    std::size_t k = 0;
    if (t >= times.back()) {
        k = s - 2;
    } else {
        // uniform grid: index from the spacing
        const double dt = times[1] - times[0];
        k = std::min<std::size_t>(static_cast<std::size_t>(std::max(0.0, t / dt)), s - 2);
        while (k + 2 < s && t > times[k + 1]) ++k;
        while (k > 0 && t < times[k]) --k;
    }
    const double th = std::clamp((t - times[k]) / (times[k + 1] - times[k]), 0.0, 1.0);
    const auto& a = states[k];
    const auto& b = states[k + 1];
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = (1.0 - th) * a[i] + th * b[i];
}

struct Attempt {
    std::vector<double> times;
    std::vector<std::vector<std::vector<Vec2>>> iterates;
    std::vector<double> rho;
    bool converged = false;
    bool diverging = false;
};

Attempt iterate_to_horizon(const VortexSystem& system, const ShapeTable& shape, double t_end,
                           const PicardSpec& spec) {
    const std::size_t n = system.size();
    const long long n_steps = std::max<long long>(1, std::llround(t_end / spec.dt));
    const double dt = t_end / n_steps;  // uniform grid shared by all iterates

    Attempt at;
    at.times.resize(n_steps + 1);
    for (long long s = 0; s <= n_steps; ++s) at.times[s] = s * dt;

    // eta^0: identity map frozen in time
    at.iterates.push_back(
        std::vector<std::vector<Vec2>>(n_steps + 1, system.positions));

    std::vector<Vec2> src(n), x(n), xs(n), k1(n), k2(n), k3(n), k4(n);
    const double inv2pi = 0.159154943091895335768883763372514362;
    std::vector<double> g2pi(n);
    for (std::size_t i = 0; i < n; ++i) g2pi[i] = inv2pi * system.circulations[i];

    VortexSystem frozen = system;  // reused as the source container per stage

    for (int iter = 1; iter <= spec.n_max; ++iter) {
        const auto& prev = at.iterates.back();
        std::vector<std::vector<Vec2>> cur;
        cur.reserve(n_steps + 1);
        x = system.positions;
        cur.push_back(x);

        auto eval = [&](const std::vector<Vec2>& state, double t, std::vector<Vec2>& vel) {
            interp_positions(at.times, prev, t, src);
            frozen.positions = src;
            vel = induced_velocity(frozen, state, shape, spec.threads);
        };

        for (long long step = 0; step < n_steps; ++step) {
            const double t = step * dt;
            eval(x, t, k1);
            for (std::size_t i = 0; i < n; ++i) xs[i] = x[i] + (0.5 * dt) * k1[i];
            eval(xs, t + 0.5 * dt, k2);
            for (std::size_t i = 0; i < n; ++i) xs[i] = x[i] + (0.5 * dt) * k2[i];
            eval(xs, t + 0.5 * dt, k3);
            for (std::size_t i = 0; i < n; ++i) xs[i] = x[i] + dt * k3[i];
            eval(xs, t + dt, k4);
            for (std::size_t i = 0; i < n; ++i)
                x[i] += (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            cur.push_back(x);
        }

        double rho = 0.0;
        for (std::size_t s = 0; s < cur.size(); ++s)
            for (std::size_t i = 0; i < n; ++i)
                rho = std::max(rho, norm(cur[s][i] - prev[s][i]));
        at.iterates.push_back(std::move(cur));
        at.rho.push_back(rho);

        if (rho < spec.tol) {
            at.converged = true;
            break;
        }
        const std::size_t m = at.rho.size();
        if (m >= 3 && at.rho[m - 1] >= at.rho[m - 2] && at.rho[m - 2] >= at.rho[m - 3]) {
            at.diverging = true;
            break;
        }
    }
    return at;
}

} // namespace

IterateStore picard_iterate(const VortexSystem& system, const ShapeTable& shape,
                            const PicardSpec& spec) {
    if (spec.n_max < 1) throw std::invalid_argument("picard_iterate: n_max must be >= 1");
    if (!(spec.dt > 0.0)) throw std::invalid_argument("picard_iterate: dt must be > 0");
    if (!(spec.t_end > 0.0)) throw std::invalid_argument("picard_iterate: t_end must be > 0");
    if (!(spec.tol > 0.0)) throw std::invalid_argument("picard_iterate: tol must be > 0");

    IterateStore store;
    store.system = system;

    Attempt at = iterate_to_horizon(system, shape, spec.t_end, spec);
    double horizon = spec.t_end;
    bool bisected = false;
    if (at.diverging) {
        // one automatic bisection of the horizon; the contraction time of the
        // scheme depends only on the total circulation mass, not on n
        horizon = 0.5 * spec.t_end;
        bisected = true;
        at = iterate_to_horizon(system, shape, horizon, spec);
    }

    store.times = std::move(at.times);
    store.iterates = std::move(at.iterates);
    store.rho = std::move(at.rho);
    store.horizon = horizon;
    store.converged = at.converged;
    store.bisected = bisected;
    return store;
}

CauchyReport cauchy_report(const IterateStore& store) {
    if (store.rho.empty()) throw std::invalid_argument("cauchy_report: no iterations stored");
    CauchyReport rep;
    rep.horizon = store.horizon;
    rep.converged = store.converged;
    for (std::size_t i = 0; i < store.rho.size(); ++i) {
        CauchyReport::Row row;
        row.n = static_cast<int>(i + 1);
        row.rho = store.rho[i];
        row.ratio = i == 0 ? std::numeric_limits<double>::quiet_NaN()
                           : store.rho[i] / store.rho[i - 1];
        rep.rows.push_back(row);
    }
    return rep;
}

std::string CauchyReport::to_json() const {
    nlohmann::ordered_json j;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json row;
        row["n"] = r.n;
        row["rho"] = r.rho;
        if (std::isnan(r.ratio))
            row["ratio"] = nullptr;
        else
            row["ratio"] = r.ratio;
        arr.push_back(row);
    }
    j["iterations"] = arr;
    j["horizon"] = horizon;
    j["converged"] = converged;
    return j.dump(2);
}

} // namespace epr
