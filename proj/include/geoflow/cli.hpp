#pragma once
// Subcommand drivers behind the geoflow executable. Each writes its artifacts
// under output_root(cfg) and returns the process exit status:
//   0 success, 1 verification failure, 2 shock or blow-up.

#include "geoflow/config.hpp"
#include "geoflow/curvature.hpp"
#include "geoflow/flow.hpp"
#include "geoflow/jacobi.hpp"
#include "geoflow/random.hpp"
#include "geoflow/vanish.hpp"
#include "geoflow/verify.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <string>

namespace geoflow {

inline constexpr int exit_ok = 0;
inline constexpr int exit_failed = 1;
inline constexpr int exit_shock = 2;

namespace detail {

inline std::filesystem::path prepare_output(const RunConfig& cfg) {
    const auto root = output_root(cfg);
    std::filesystem::create_directories(root);
    std::ofstream os(root / (cfg.command + ".cfg"));
    if (!os) throw std::runtime_error("cannot write config copy into " + root.string());
    os << cfg.to_text();
    return root;
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    os << j.dump(2) << '\n';
    if (!os) throw std::runtime_error("write failed for " + path.string());
}

inline std::ofstream open_csv(const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    os.imbue(std::locale::classic());
    os << std::setprecision(17);
    return os;
}

} // namespace detail

/// trajectory.csv (every stride-th state) and trajectory.json.
inline int cmd_solve(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    const auto root = detail::prepare_output(cfg);
    const Grid grid = cfg.grid();
    const Trajectory tr = solve(cfg.spec(), initial_condition(grid, cfg.ic), cfg.a, cfg.T, cfg.dt);

    Trajectory kept = tr;
    kept.states.clear();
    for (std::size_t i = 0; i < tr.states.size(); i += cfg.stride) kept.states.push_back(tr.states[i]);
    if ((tr.states.size() - 1) % cfg.stride != 0) kept.states.push_back(tr.states.back());
    write_trajectory_csv((root / "trajectory.csv").string(), kept);

    nlohmann::json j = trajectory_summary(tr, cfg.T);
    j["ic"] = cfg.ic;
    detail::write_json(root / "trajectory.json", j);
    log << "solve " << j["spec"].get<std::string>() << ": t_final = " << tr.final_time()
        << ", momentum drift = " << j["momentum_drift"] << ", energy drift = " << j["energy_drift"] << '\n';
    if (tr.stop) {
        log << "stopped at t = " << tr.stop->time << ": " << tr.stop->reason;
        if (j["shock_time"].is_number()) log << " (predicted shock at t = " << j["shock_time"] << ")";
        log << '\n';
        return exit_shock;
    }
    return exit_ok;
}

/// Two seeded random Jacobi fields along an H^0 geodesic: jacobi.csv (pairing drift per
/// stored state) and jacobi.json.
inline int cmd_jacobi(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    const InertiaSpec spec = cfg.spec();
    if (spec.order() != 0) throw InvalidArgument("jacobi: only the h0 family has a Jacobi solver");
    const auto root = detail::prepare_output(cfg);
    const Grid grid = cfg.grid();
    const Trajectory tr = solve(spec, initial_condition(grid, cfg.ic), cfg.a, cfg.T, cfg.dt);

    CounterRng rng(cfg.seed, 11);
    auto field = [&] { return random_trig(grid, rng, 3, 0.5); };
    const Field y1 = field(), v1 = field(), y2 = field(), v2 = field();
    const double b1 = rng.uniform(-1, 1), c1 = rng.uniform(-1, 1), b2 = rng.uniform(-1, 1), c2 = rng.uniform(-1, 1);
    const auto j1 = solve_jacobi(tr, y1, v1, b1, c1);
    const auto j2 = solve_jacobi(tr, y2, v2, b2, c2);

    std::vector<JacobiRow> rows;
    const double p0 = symplectic_pairing(tr.states[0].u, cfg.a, j1[0], j2[0]);
    double drift = 0.0, b1res = 0.0;
    for (std::size_t i = 0; i < tr.states.size(); ++i) {
        const Field& u = tr.states[i].u;
        const double p = symplectic_pairing(u, cfg.a, j1[i], j2[i]);
        const JacobiRow r{tr.states[i].t, p, std::abs(p - p0), std::max(b1_residual(j1[i], u), b1_residual(j2[i], u)),
                          std::max(j1[i].y.max_abs(), j2[i].y.max_abs())};
        drift = std::max(drift, r.pairing_drift);
        b1res = std::max(b1res, r.b1_residual);
        if (i % cfg.stride == 0 || i + 1 == tr.states.size()) rows.push_back(r);
    }
    write_jacobi_csv((root / "jacobi.csv").string(), rows);

    nlohmann::json j;
    j["spec"] = spec.name();
    j["n"] = cfg.n;
    j["dt"] = cfg.dt;
    j["T"] = cfg.T;
    j["a"] = cfg.a;
    j["seed"] = cfg.seed;
    j["final_time"] = tr.final_time();
    j["pairing_initial"] = p0;
    j["pairing_drift"] = drift;
    j["b1_residual"] = b1res;
    j["exit_reason"] = tr.stop ? "shock" : "completed";
    detail::write_json(root / "jacobi.json", j);
    log << "jacobi: pairing drift = " << drift << ", B1 residual = " << b1res << '\n';
    return tr.stop ? exit_shock : exit_ok;
}

/// curvature.csv with columns case,index,a1,a2,generic,closed_form,discrepancy,reference,reference_discrepancy.
///   virasoro-sincos  generic = gamma(4R(X1,X2)X1,X2) from the quadruple, closed = integral form,
///                    reference = -pi (8 + a1^2 + a2^2 - 3 pi)
///   burgers-sincos   generic = sectional(sin, cos) from the quadruple, closed = from the
///                    specialised numerator, reference = 2/pi
///   virasoro-random  count seeded (X1, a1, X2, a2), no reference
///   burgers-random   count seeded pairs, generic = sectional, closed = from the numerator
inline int cmd_curvature(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    const auto root = detail::prepare_output(cfg);
    const Grid grid = cfg.grid();
    const InertiaSpec h0 = InertiaSpec::hk(0);
    const InertiaSpec vir = h0.with_center();
    const double pi = std::numbers::pi;
    auto os = detail::open_csv(root / "curvature.csv");
    os << "case,index,a1,a2,generic,closed_form,discrepancy,reference,reference_discrepancy\n";
    double worst = 0.0;
    auto row = [&](std::size_t i, double a1, double a2, double generic, double closed, double reference) {
        worst = std::max(worst, std::abs(generic - closed));
        os << cfg.curvature_case << ',' << i << ',' << a1 << ',' << a2 << ',' << generic << ',' << closed << ','
           << std::abs(generic - closed) << ',';
        if (std::isfinite(reference)) os << reference << ',' << std::abs(generic - reference);
        else os << ',';
        os << '\n';
    };
    auto sectional_from_numerator = [&](const Field& x, const Field& y) {
        const CentralVec X(x), Y(y);
        const double d = norm2(h0, X) * norm2(h0, Y) - std::pow(inner(h0, X, Y), 2);
        return -curvature_sectional_numerator(h0, X, Y) / 4.0 / d;
    };
    const Field S = Field::sample(grid, [](double x) { return std::sin(x); });
    const Field C = Field::sample(grid, [](double x) { return std::cos(x); });
    CounterRng rng(cfg.seed, 12);
    const std::string& c = cfg.curvature_case;
    if (c == "virasoro-sincos") {
        const double generic = curvature_quadruple(vir, {S, cfg.a1}, {C, cfg.a2}, {S, cfg.a1}, {C, cfg.a2});
        row(0, cfg.a1, cfg.a2, generic, virasoro_curvature_form(S, cfg.a1, C, cfg.a2),
            -pi * (8.0 + cfg.a1 * cfg.a1 + cfg.a2 * cfg.a2 - 3.0 * pi));
    } else if (c == "burgers-sincos") {
        row(0, 0.0, 0.0, sectional(h0, S, C), sectional_from_numerator(S, C), 2.0 / pi);
    } else if (c == "virasoro-random") {
        for (std::size_t i = 0; i < cfg.count; ++i) {
            const Field x1 = random_trig(grid, rng), x2 = random_trig(grid, rng);
            const double a1 = rng.uniform(-1, 1), a2 = rng.uniform(-1, 1);
            row(i, a1, a2, curvature_quadruple(vir, {x1, a1}, {x2, a2}, {x1, a1}, {x2, a2}),
                virasoro_curvature_form(x1, a1, x2, a2), std::nan(""));
        }
    } else if (c == "burgers-random") {
        for (std::size_t i = 0; i < cfg.count; ++i) {
            const Field x = random_trig(grid, rng), y = random_trig(grid, rng);
            row(i, 0.0, 0.0, sectional(h0, x, y), sectional_from_numerator(x, y), std::nan(""));
        }
    } else {
        throw InvalidArgument("curvature: unknown case '" + c + "'");
    }
    if (!os) throw std::runtime_error("write failed for curvature.csv");
    log << "curvature " << c << ": max |generic - closed form| = " << worst << '\n';
    return exit_ok;
}

/// vanish.csv (one row per eps) and vanish.json, with the basic-wave energy bound
/// check on t in [0, 1] and the straight-line path as a reference.
inline int cmd_vanish(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    const auto root = detail::prepare_output(cfg);
    const Displacement target = target_displacement(cfg.target);
    const auto eps = cfg.eps_list();
    const auto rows = vanishing_demo(target, eps);

    auto os = detail::open_csv(root / "vanish.csv");
    os << "eps,energy,length_bound,length,duration,dt,min_jacobian,endpoint_error\n";
    bool monotone = true;
    nlohmann::json jr = nlohmann::json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        os << r.eps << ',' << r.energy << ',' << r.length_bound << ',' << r.length << ',' << r.duration << ',' << r.dt
           << ',' << r.min_jacobian << ',' << r.endpoint_error << '\n';
        if (i > 0 && eps[i] < eps[i - 1] && !(r.length_bound < rows[i - 1].length_bound)) monotone = false;
        const CompressionWave wave(WaveSpec::with_eps(r.eps));
        const PathMetrics basic = basic_wave_metrics(wave, 0.0, 1.0, wave_time_step(r.eps));
        jr.push_back({{"eps", r.eps},
                      {"energy", r.energy},
                      {"length", r.length},
                      {"length_bound", r.length_bound},
                      {"duration", r.duration},
                      {"endpoint_error", r.endpoint_error},
                      {"basic_wave_energy", basic.energy},
                      {"basic_wave_bound", wave.energy_bound(0.0, 1.0)}});
    }
    if (!os) throw std::runtime_error("write failed for vanish.csv");
    const PathMetrics lin = linear_path_metrics(target, 512);
    nlohmann::json j;
    j["target"] = cfg.target;
    j["rows"] = jr;
    j["length_bound_decreasing"] = monotone;
    j["linear_path"] = {{"energy", lin.energy}, {"length", lin.length}};
    detail::write_json(root / "vanish.json", j);
    log << "vanish: " << rows.size() << " eps values, length bound " << (monotone ? "decreasing" : "NOT decreasing")
        << ", straight-line length " << lin.length << '\n';
    return exit_ok;
}

/// verify-<suite>.json; the same report is echoed to the log stream.
inline int cmd_verify(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    std::vector<std::string> suites;
    if (cfg.suite == "all") suites = verify_suites();
    else suites = {cfg.suite};
    const auto root = output_root(cfg);
    std::filesystem::create_directories(root);
    bool ok = true;
    for (const auto& s : suites) {
        const nlohmann::json report = suite_report(s, cfg.seed, run_suite(s, cfg.seed));
        ok = ok && report["passed"].get<bool>();
        detail::write_json(root / ("verify-" + s + ".json"), report);
        log << report.dump(2) << '\n';
    }
    return ok ? exit_ok : exit_failed;
}

inline int run_command(const RunConfig& cfg, std::ostream& log) {
    if (cfg.command == "solve") return cmd_solve(cfg, log);
    if (cfg.command == "jacobi") return cmd_jacobi(cfg, log);
    if (cfg.command == "curvature") return cmd_curvature(cfg, log);
    if (cfg.command == "vanish") return cmd_vanish(cfg, log);
    if (cfg.command == "verify") return cmd_verify(cfg, log);
    throw InvalidArgument("unknown command '" + cfg.command + "'");
}

} // namespace geoflow
