// epr: command-line front end for the eulerpoincare library.
//
// Subcommands: kernel-verify, simulate, l1-distance, converge, picard.
// Configuration is a single JSON file; any key can be overridden on the
// command line with a dotted path, e.g. --time.dt=0.001.  Every run writes
// a manifest.json with the fully resolved configuration, which can itself be
// used as a config to reproduce the run.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "eulerpoincare.h"

using json = nlohmann::ordered_json;

namespace {

struct CliError {
    int exit_code;
    std::string code;
    std::string field;
    std::string message;
};

[[noreturn]] void fail(int exit_code, const std::string& code, const std::string& field,
                       const std::string& message) {
    throw CliError{exit_code, code, field, message};
}

[[noreturn]] void fail_validation(const std::string& field, const std::string& message) {
    fail(2, "invalid_config", field, message);
}

void check_status(epr_status st, const std::string& context) {
    if (st != EPR_OK) fail(1, "runtime_error", context, epr_last_error());
}

// unique_ptr-style guards for the C handles
template <class T, void (*Free)(T*)>
struct Handle {
    T* ptr = nullptr;
    Handle() = default;
    explicit Handle(T* p) : ptr(p) {}
    ~Handle() { Free(ptr); }
    Handle(const Handle&) = delete;
    Handle& operator=(const Handle&) = delete;
    Handle(Handle&& o) noexcept : ptr(o.ptr) { o.ptr = nullptr; }
    Handle& operator=(Handle&& o) noexcept {
        if (this != &o) {
            Free(ptr);
            ptr = o.ptr;
            o.ptr = nullptr;
        }
        return *this;
    }
    T* get() const { return ptr; }
    T** out() { return &ptr; }
};
using ShapeHandle = Handle<epr_shape, epr_shape_free>;
using SystemHandle = Handle<epr_system, epr_system_free>;
using ProfileHandle = Handle<epr_profile, epr_profile_free>;
using TrajectoryHandle = Handle<epr_trajectory, epr_trajectory_free>;

json default_config(const std::string& subcommand) {
    json cfg;
    cfg["kernel"] = {{"name", "blob"}, {"epsilon", 1.0}};
    cfg["initial_data"] = {{"kind", "points"},
                           {"positions", json::array()},
                           {"circulations", json::array()}};
    cfg["time"] = {{"t_end", 1.0}, {"dt", 1e-3}, {"sample_every", 100}};
    cfg["experiment"] = {{"type", subcommand}};
    cfg["output"] = "out";
    cfg["seed"] = 12345;
    cfg["threads"] = 1;
    return cfg;
}

void merge(json& base, const json& patch) {
    if (!patch.is_object() || !base.is_object()) {
        base = patch;
        return;
    }
    for (auto it = patch.begin(); it != patch.end(); ++it) {
        if (base.contains(it.key()))
            merge(base[it.key()], it.value());
        else
            base[it.key()] = it.value();
    }
}

void set_path(json& cfg, const std::string& path, const json& value) {
    json* node = &cfg;
    std::size_t pos = 0;
    while (true) {
        const std::size_t dot = path.find('.', pos);
        const std::string key = path.substr(pos, dot == std::string::npos ? dot : dot - pos);
        if (key.empty()) fail_validation(path, "empty key in override path");
        if (dot == std::string::npos) {
            (*node)[key] = value;
            return;
        }
        node = &(*node)[key];
        pos = dot + 1;
    }
}

json parse_value(const std::string& text) {
    json v = json::parse(text, nullptr, false);
    if (v.is_discarded()) return json(text);  // bare strings stay strings
    return v;
}

double require_number(const json& cfg, const std::string& path) {
    const json* node = &cfg;
    std::size_t pos = 0;
    while (true) {
        const std::size_t dot = path.find('.', pos);
        const std::string key = path.substr(pos, dot == std::string::npos ? dot : dot - pos);
        if (!node->contains(key)) fail_validation(path, "missing required key");
        node = &(*node)[key];
        if (dot == std::string::npos) break;
        pos = dot + 1;
    }
    if (!node->is_number()) fail_validation(path, "expected a number");
    return node->get<double>();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(1, "io_error", path.string(), "cannot open for writing");
    out << text;
}

// ---- resolved pieces ----

ShapeHandle make_kernel(const json& cfg) {
    const json& k = cfg.at("kernel");
    const double eps = k.contains("epsilon") ? require_number(cfg, "kernel.epsilon") : 1.0;
    if (k.contains("profile_csv")) {
        if (!(eps > 0.0)) fail_validation("kernel.epsilon", "must be > 0");
        ProfileHandle p;
        check_status(epr_profile_from_csv(k["profile_csv"].get<std::string>().c_str(), p.out()),
                     "kernel.profile_csv");
        ShapeHandle s;
        check_status(epr_shape_build(p.get(), eps, 0, 0.0, s.out()), "kernel.profile_csv");
        return s;
    }
    const std::string name = k.value("name", "blob");
    if (name != "exact" && !(eps > 0.0)) fail_validation("kernel.epsilon", "must be > 0");
    ShapeHandle s;
    check_status(epr_shape_builtin(name.c_str(), eps, s.out()), "kernel.name");
    return s;
}

struct RankineCtx {
    double cx, cy, r2, omega;
};

double rankine_field(double x, double y, void* ctx) {
    const RankineCtx* c = static_cast<const RankineCtx*>(ctx);
    const double dx = x - c->cx, dy = y - c->cy;
    return dx * dx + dy * dy <= c->r2 ? c->omega : 0.0;
}

struct SegmentCtx {
    double x0, y0, x1, y1, strength;
};

void segment_curve(double s, void* ctx, double out[2]) {
    const SegmentCtx* c = static_cast<const SegmentCtx*>(ctx);
    out[0] = c->x0 + s * (c->x1 - c->x0);
    out[1] = c->y0 + s * (c->y1 - c->y0);
}

double segment_strength(double, void* ctx) {
    return static_cast<const SegmentCtx*>(ctx)->strength;
}

SystemHandle make_initial_data(const json& cfg) {
    const json& d = cfg.at("initial_data");
    const std::string kind = d.value("kind", "points");
    SystemHandle sys;
    if (kind == "points") {
        if (!d.contains("positions") || !d["positions"].is_array())
            fail_validation("initial_data.positions", "expected an array of [x, y] pairs");
        if (!d.contains("circulations") || !d["circulations"].is_array())
            fail_validation("initial_data.circulations", "expected an array of numbers");
        std::vector<double> xy;
        for (const auto& p : d["positions"]) {
            if (!p.is_array() || p.size() != 2)
                fail_validation("initial_data.positions", "each position must be [x, y]");
            xy.push_back(p[0].get<double>());
            xy.push_back(p[1].get<double>());
        }
        std::vector<double> gamma;
        for (const auto& g : d["circulations"]) gamma.push_back(g.get<double>());
        if (gamma.size() * 2 != xy.size())
            fail_validation("initial_data.circulations", "length must match positions");
        check_status(
            epr_system_points(xy.data(), gamma.data(), static_cast<int>(gamma.size()), sys.out()),
            "initial_data");
    } else if (kind == "patch") {
        const double radius = d.value("radius", 1.0);
        const double spacing = d.contains("spacing") ? d["spacing"].get<double>() : 0.05;
        if (!(spacing > 0.0)) fail_validation("initial_data.spacing", "must be > 0");
        if (!(radius > 0.0)) fail_validation("initial_data.radius", "must be > 0");
        RankineCtx ctx{d.value("center_x", 0.0), d.value("center_y", 0.0), radius * radius,
                       d.value("omega", 1.0)};
        const double pad = radius + spacing;
        const double box[4] = {ctx.cx - pad, ctx.cy - pad, ctx.cx + pad, ctx.cy + pad};
        check_status(epr_system_patch(rankine_field, &ctx, box, spacing, sys.out()),
                     "initial_data");
    } else if (kind == "sheet") {
        SegmentCtx ctx{};
        const json from = d.value("from", json::array({-1.0, 0.0}));
        const json to = d.value("to", json::array({1.0, 0.0}));
        ctx.x0 = from[0].get<double>();
        ctx.y0 = from[1].get<double>();
        ctx.x1 = to[0].get<double>();
        ctx.y1 = to[1].get<double>();
        ctx.strength = d.value("strength", 1.0);
        const int n = d.value("count", 100);
        if (n < 2) fail_validation("initial_data.count", "must be >= 2");
        check_status(epr_system_sheet(segment_curve, &ctx, segment_strength, &ctx, 0.0, 1.0, n,
                                      sys.out()),
                     "initial_data");
    } else {
        fail_validation("initial_data.kind", "expected points, patch or sheet");
    }
    return sys;
}

std::vector<double> make_tracers(const json& cfg) {
    std::vector<double> xy;
    if (!cfg.contains("tracers")) return xy;
    const json& t = cfg["tracers"];
    const std::string kind = t.value("kind", "ring");
    if (kind == "ring") {
        const double radius = t.value("radius", 2.0);
        const int count = t.value("count", 16);
        if (count < 1) fail_validation("tracers.count", "must be >= 1");
        const double cx = t.value("center_x", 0.0), cy = t.value("center_y", 0.0);
        for (int k = 0; k < count; ++k) {
            const double th = 2.0 * 3.141592653589793238462643383279502884 * k / count;
            xy.push_back(cx + radius * std::cos(th));
            xy.push_back(cy + radius * std::sin(th));
        }
    } else if (kind == "points") {
        for (const auto& p : t.at("positions")) {
            xy.push_back(p[0].get<double>());
            xy.push_back(p[1].get<double>());
        }
    } else {
        fail_validation("tracers.kind", "expected ring or points");
    }
    return xy;
}

void validate_time(const json& cfg) {
    if (!(require_number(cfg, "time.dt") > 0.0)) fail_validation("time.dt", "must be > 0");
    if (!(require_number(cfg, "time.t_end") > 0.0)) fail_validation("time.t_end", "must be > 0");
    if (cfg["time"].contains("sample_every") && cfg["time"]["sample_every"].get<int>() < 1)
        fail_validation("time.sample_every", "must be >= 1");
}

std::vector<double> eps_list_from(const json& cfg, const char* fallback_key) {
    std::vector<double> eps;
    const json& ex = cfg.at("experiment");
    if (ex.contains("eps_list")) {
        for (const auto& e : ex["eps_list"]) eps.push_back(e.get<double>());
        for (std::size_t i = 1; i < eps.size(); ++i)
            if (!(eps[i] < eps[i - 1]))
                fail_validation("experiment.eps_list", "must be strictly decreasing");
        if (!eps.empty() && !(eps.back() > 0.0))
            fail_validation("experiment.eps_list", "entries must be > 0");
    } else if (fallback_key) {
        eps.push_back(require_number(cfg, fallback_key));
    }
    return eps;
}

// ---- subcommands ----

void run_simulate(const json& cfg, const std::filesystem::path& out_dir) {
    validate_time(cfg);
    ShapeHandle shape = make_kernel(cfg);
    SystemHandle sys = make_initial_data(cfg);
    const std::vector<double> tracers = make_tracers(cfg);
    const double t_end = cfg["time"]["t_end"].get<double>();
    const double dt = cfg["time"]["dt"].get<double>();
    const int sample_every = cfg["time"].value("sample_every", 100);
    const int threads = cfg.value("threads", 1);

    check_status(epr_system_write_csv(sys.get(), (out_dir / "initial_state.csv").c_str()),
                 "initial_state.csv");

    TrajectoryHandle sources, tracer_traj;
    if (tracers.empty()) {
        check_status(epr_evolve(sys.get(), shape.get(), t_end, dt, sample_every, threads, 1,
                                sources.out()),
                     "simulate");
    } else {
        check_status(epr_passive_tracers(sys.get(), shape.get(), tracers.data(),
                                         static_cast<int>(tracers.size() / 2), t_end, dt,
                                         sample_every, threads, 1, sources.out(),
                                         tracer_traj.out()),
                     "simulate");
    }
    check_status(epr_trajectory_write_csv(sources.get(), (out_dir / "trajectory.csv").c_str()),
                 "trajectory.csv");
    check_status(epr_trajectory_write_diagnostics_jsonl(
                     sources.get(), (out_dir / "diagnostics.jsonl").c_str()),
                 "diagnostics.jsonl");
    if (tracer_traj.get())
        check_status(
            epr_trajectory_write_csv(tracer_traj.get(), (out_dir / "tracers.csv").c_str()),
            "tracers.csv");
}

void run_kernel_verify(const json& cfg, const std::filesystem::path& out_dir) {
    ShapeHandle shape = make_kernel(cfg);
    const int pairs = cfg["experiment"].value("pairs", 10000);
    const auto seed = static_cast<unsigned long long>(cfg.value("seed", 12345));
    char* report = nullptr;
    check_status(epr_verify_kernel_lemmas(shape.get(), pairs, seed, &report), "kernel-verify");
    write_text(out_dir / "kernel_report.json", std::string(report) + "\n");
    epr_string_free(report);
}

void run_l1_distance(const json& cfg, const std::filesystem::path& out_dir) {
    ShapeHandle shape = make_kernel(cfg);
    std::vector<double> eps = eps_list_from(cfg, "kernel.epsilon");
    json rows = json::array();
    for (double e : eps) {
        double value = 0.0, bound = 0.0;
        check_status(epr_l1_kernel_distance(shape.get(), e, &value, &bound), "l1-distance");
        rows.push_back({{"epsilon", e}, {"value", value}, {"bound", bound}});
    }
    json rep;
    rep["entries"] = rows;
    write_text(out_dir / "l1_report.json", rep.dump(2) + "\n");
}

void run_converge(const json& cfg, const std::filesystem::path& out_dir) {
    validate_time(cfg);
    const json& d = cfg.at("initial_data");
    if (d.value("kind", "patch") != "patch")
        fail_validation("initial_data.kind", "converge requires a patch");
    std::vector<double> eps = eps_list_from(cfg, nullptr);
    if (eps.empty()) eps = {0.4, 0.2, 0.1};
    if (eps.size() < 2) fail_validation("experiment.eps_list", "need at least two entries");

    const json tr = cfg.value("tracers", json{{"kind", "ring"}, {"radius", 2.0}, {"count", 16}});
    const std::string profile = cfg["kernel"].value("name", "blob");
    char* report = nullptr;
    check_status(
        epr_converge(d.value("radius", 1.0), d.value("omega", 1.0), d.value("spacing", 0.03),
                     tr.value("radius", 2.0), tr.value("count", 16), profile.c_str(), eps.data(),
                     static_cast<int>(eps.size()), cfg["time"]["t_end"].get<double>(),
                     cfg["time"]["dt"].get<double>(), cfg["time"].value("sample_every", 5),
                     cfg.value("threads", 1), cfg["experiment"].value("dt_check", true) ? 1 : 0,
                     &report),
        "converge");
    write_text(out_dir / "convergence.json", std::string(report) + "\n");
    epr_string_free(report);
}

void run_picard(const json& cfg, const std::filesystem::path& out_dir) {
    validate_time(cfg);
    ShapeHandle shape = make_kernel(cfg);
    SystemHandle sys = make_initial_data(cfg);
    const int n_max = cfg["experiment"].value("n_max", 20);
    const double tol = cfg["experiment"].value("tol", 1e-8);
    if (n_max < 1) fail_validation("experiment.n_max", "must be >= 1");
    if (!(tol > 0.0)) fail_validation("experiment.tol", "must be > 0");

    char* report = nullptr;
    TrajectoryHandle final_it;
    check_status(epr_picard(sys.get(), shape.get(), cfg["time"]["t_end"].get<double>(),
                            cfg["time"]["dt"].get<double>(), n_max, tol, cfg.value("threads", 1),
                            &report, final_it.out()),
                 "picard");
    write_text(out_dir / "picard_report.json", std::string(report) + "\n");
    epr_string_free(report);
    check_status(
        epr_trajectory_write_csv(final_it.get(), (out_dir / "picard_final.csv").c_str()),
        "picard_final.csv");
}

int run(int argc, char** argv) {
    const std::vector<std::string> subcommands = {"kernel-verify", "simulate", "l1-distance",
                                                  "converge", "picard"};
    if (argc < 2) {
        std::fprintf(stderr,
                     "usage: epr <kernel-verify|simulate|l1-distance|converge|picard>"
                     " [--config FILE] [--key.path=value ...]\n");
        return 2;
    }
    const std::string sub = argv[1];
    if (sub == "--help" || sub == "-h") {
        std::printf(
            "epr %s -- regularized 2D vortex dynamics\n"
            "usage: epr <subcommand> [--config FILE] [--key.path=value ...]\n"
            "subcommands: kernel-verify simulate l1-distance converge picard\n"
            "Any configuration key can be overridden with a dotted path,\n"
            "e.g. --time.dt=0.001 --kernel.epsilon=0.5 --output=out_dir\n",
            epr_version());
        return 0;
    }
    bool known = false;
    for (const auto& s : subcommands) known = known || s == sub;
    if (!known) fail_validation("subcommand", "unknown subcommand '" + sub + "'");

    json cfg = default_config(sub);
    std::vector<std::pair<std::string, json>> overrides;
    for (int i = 2; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg.rfind("--", 0) != 0) fail_validation("argv", "unexpected argument '" + arg + "'");
        arg = arg.substr(2);
        std::string key, value;
        const std::size_t eq = arg.find('=');
        if (eq != std::string::npos) {
            key = arg.substr(0, eq);
            value = arg.substr(eq + 1);
        } else {
            if (i + 1 >= argc) fail_validation(arg, "missing value");
            key = arg;
            value = argv[++i];
        }
        if (key == "config") {
            std::ifstream in(value);
            if (!in) fail(2, "invalid_config", "config", "cannot open " + value);
            json file = json::parse(in, nullptr, false);
            if (file.is_discarded()) fail(2, "invalid_config", "config", "malformed JSON");
            file.erase("version");  // manifests load as configs
            merge(cfg, file);
        } else {
            overrides.emplace_back(key, parse_value(value));
        }
    }
    for (const auto& [key, value] : overrides) set_path(cfg, key, value);
    cfg["experiment"]["type"] = sub;  // the subcommand wins

    const std::filesystem::path out_dir = cfg.value("output", "out");
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) fail(1, "io_error", "output", ec.message());

    json manifest = cfg;
    manifest["version"] = epr_version();
    write_text(out_dir / "manifest.json", manifest.dump(2) + "\n");

    if (sub == "simulate")
        run_simulate(cfg, out_dir);
    else if (sub == "kernel-verify")
        run_kernel_verify(cfg, out_dir);
    else if (sub == "l1-distance")
        run_l1_distance(cfg, out_dir);
    else if (sub == "converge")
        run_converge(cfg, out_dir);
    else if (sub == "picard")
        run_picard(cfg, out_dir);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const CliError& e) {
        json err;
        err["error"] = {{"code", e.code}, {"field", e.field}, {"message", e.message}};
        std::fprintf(stderr, "%s\n", err.dump().c_str());
        return e.exit_code;
    } catch (const std::exception& e) {
        json err;
        err["error"] = {{"code", "internal"}, {"field", ""}, {"message", e.what()}};
        std::fprintf(stderr, "%s\n", err.dump().c_str());
        return 1;
    }
}
