#pragma once
// Property batteries behind `geoflow verify`. Each check records a measured
// residual and the interval it must fall in; a suite is deterministic given
// its seed, so two runs produce byte-identical reports.

#include "geoflow/config.hpp"
#include "geoflow/curvature.hpp"
#include "geoflow/diffeo.hpp"
#include "geoflow/flow.hpp"
#include "geoflow/jacobi.hpp"
#include "geoflow/metrics.hpp"
#include "geoflow/random.hpp"
#include "geoflow/vanish.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace geoflow {

struct Check {
    std::string property;
    double residual = 0.0;
    std::optional<double> lower;
    std::optional<double> upper;

    bool passed() const {
        if (!std::isfinite(residual)) return false;
        if (lower && residual < *lower) return false;
        if (upper && residual > *upper) return false;
        return true;
    }
};

inline Check at_most(std::string name, double value, double tol) { return {std::move(name), value, std::nullopt, tol}; }
inline Check at_least(std::string name, double value, double tol) { return {std::move(name), value, tol, std::nullopt}; }
inline Check within(std::string name, double value, double lo, double hi) { return {std::move(name), value, lo, hi}; }

inline const std::vector<std::string>& verify_suites() {
    static const std::vector<std::string> s = {"algebra", "cocycles", "curvature", "conservation",
                                               "jacobi",  "vanish",   "convergence"};
    return s;
}

namespace detail {

inline double rel(double err, double scale) { return err / std::max(1.0, std::abs(scale)); }

inline std::vector<InertiaSpec> algebra_specs() {
    return {InertiaSpec::hk(0), InertiaSpec::hk(1), InertiaSpec::ga(0.5), InertiaSpec::hk(0).with_center(),
            InertiaSpec::hk(1).with_center()};
}

inline CentralVec random_vec(const Grid& g, CounterRng& rng, bool central, int modes = 4) {
    Field x = random_trig(g, rng, modes, 1.0, 0.5);
    return {std::move(x), central ? rng.uniform(-1.0, 1.0) : 0.0};
}

} // namespace detail

inline std::vector<Check> verify_algebra(std::uint64_t seed, int samples = 20) {
    const Grid g(64);
    CounterRng rng(seed, 1);
    double anti = 0.0, jac = 0.0, adtcomm = 0.0;
    std::vector<double> adj(detail::algebra_specs().size(), 0.0);
    double minnorm = std::numeric_limits<double>::infinity();
    for (int s = 0; s < samples; ++s) {
        const Field X = random_trig(g, rng), Y = random_trig(g, rng), Z = random_trig(g, rng);
        anti = std::max(anti, (field_bracket(X, Y) + field_bracket(Y, X)).max_abs());
        const Field cyc = field_bracket(X, field_bracket(Y, Z)) + field_bracket(Y, field_bracket(Z, X)) +
                          field_bracket(Z, field_bracket(X, Y));
        jac = std::max(jac, cyc.max_abs());
        const auto specs = detail::algebra_specs();
        for (std::size_t k = 0; k < specs.size(); ++k) {
            const InertiaSpec& sp = specs[k];
            const bool c = sp.extended();
            const CentralVec x = detail::random_vec(g, rng, c), y = detail::random_vec(g, rng, c),
                             z = detail::random_vec(g, rng, c);
            const double lhs = inner(sp, ad(sp, x, y), z), rhs_ = inner(sp, y, ad_transpose(sp, x, z));
            adj[k] = std::max(adj[k], detail::rel(lhs - rhs_, lhs));
            minnorm = std::min(minnorm, norm2(sp, x) / std::pow(x.max_abs(), 2));
        }
        // ad is a Lie algebra homomorphism, so its transpose reverses commutators.
        const InertiaSpec h1 = InertiaSpec::hk(1);
        const CentralVec x(X), y(Y), z(Z);
        const CentralVec lhs =
            ad_transpose(h1, x, ad_transpose(h1, y, z)) - ad_transpose(h1, y, ad_transpose(h1, x, z));
        const CentralVec rhs_ = -ad_transpose(h1, ad(h1, x, y), z);
        adtcomm = std::max(adtcomm, (lhs - rhs_).max_abs() / std::max(1.0, rhs_.max_abs()));
    }
    std::vector<Check> out;
    out.push_back(at_most("bracket antisymmetry", anti, 1e-12));
    out.push_back(at_most("bracket Jacobi identity", jac, 1e-11));
    const auto specs = detail::algebra_specs();
    for (std::size_t k = 0; k < specs.size(); ++k)
        out.push_back(at_most("ad-transpose adjoint to ad (" + specs[k].name() + ")", adj[k], 1e-10));
    out.push_back(at_most("ad-transpose reverses commutators (h1)", adtcomm, 1e-10));
    out.push_back(at_least("inertia positive definite", minnorm, 1e-6));
    return out;
}

inline std::vector<Check> verify_cocycles(std::uint64_t seed, int samples = 20) {
    const Grid g(128);
    CounterRng rng(seed, 2);
    double bott = 0.0, gf = 0.0, gfanti = 0.0, schw = 0.0, schwinv = 0.0, assoc = 0.0, inv = 0.0, adhom = 0.0,
           infinitesimal = 0.0;
    for (int s = 0; s < samples; ++s) {
        const Diffeo p = random_diffeo(g, rng), q = random_diffeo(g, rng), r = random_diffeo(g, rng);
        const double l = bott_cocycle(compose(p, q), r) + bott_cocycle(p, q);
        const double rr = bott_cocycle(p, compose(q, r)) + bott_cocycle(q, r);
        bott = std::max(bott, std::abs(l - rr));

        const Field X = random_trig(g, rng), Y = random_trig(g, rng), Z = random_trig(g, rng);
        gf = std::max(gf, std::abs(gelfand_fuchs(field_bracket(X, Y), Z) + gelfand_fuchs(field_bracket(Y, Z), X) +
                                   gelfand_fuchs(field_bracket(Z, X), Y)));
        gfanti = std::max(gfanti, std::abs(gelfand_fuchs(X, Y) + gelfand_fuchs(Y, X)));

        const Field qx = q.jacobian();
        schw = std::max(schw, (schwarzian(compose(p, q)) - (pullback(schwarzian(p), q) * qx * qx + schwarzian(q)))
                                  .max_abs());
        const Diffeo pi = invert(p);
        const Field pix = pi.jacobian();
        schwinv = std::max(schwinv, (schwarzian(pi) + pullback(schwarzian(p), pi) * pix * pix).max_abs());

        const VirasoroElement G{p, rng.uniform(-1, 1)}, H{q, rng.uniform(-1, 1)}, K{r, rng.uniform(-1, 1)};
        const auto A = vira_mul(vira_mul(G, H), K), B = vira_mul(G, vira_mul(H, K));
        assoc = std::max({assoc, (A.phi.disp() - B.phi.disp()).max_abs(), std::abs(A.alpha - B.alpha)});
        const auto E = vira_mul(G, vira_inv(G));
        inv = std::max({inv, E.phi.disp().max_abs(), std::abs(E.alpha)});
        const CentralVec v(random_trig(g, rng), rng.uniform(-1, 1));
        adhom = std::max(adhom, (vira_adjoint(vira_mul(G, H), v) - vira_adjoint(G, vira_adjoint(H, v))).max_abs());

        // c(id + sX, id + tY) - c(id + tY, id + sX) = s t omega(X, Y) + O(s^2 t + s t^2).
        const double h = 1e-4;
        const Field U = random_trig(g, rng, 3, 1.0), V = random_trig(g, rng, 3, 1.0);
        const Diffeo ps(h * U), qs(h * V);
        const double w = gelfand_fuchs(U, V);
        infinitesimal = std::max(
            infinitesimal, detail::rel((bott_cocycle(ps, qs) - bott_cocycle(qs, ps)) / (h * h) - w, w));
    }
    return {at_most("Bott group cocycle identity", bott, 1e-8),
            at_most("Gelfand-Fuchs cocycle identity", gf, 1e-8),
            at_most("Gelfand-Fuchs antisymmetry", gfanti, 1e-10),
            at_most("Schwarzian composition law", schw, 1e-8),
            // The inverse is not a trigonometric polynomial, so it carries spectral truncation error.
            at_most("Schwarzian of the inverse", schwinv, 1e-6),
            at_most("Virasoro product associative", assoc, 1e-10),
            at_most("Virasoro inverse", inv, 1e-10),
            at_most("Ad is a homomorphism", adhom, 1e-9),
            at_most("Bott cocycle linearises to Gelfand-Fuchs", infinitesimal, 1e-3)};
}

inline std::vector<Check> verify_curvature(std::uint64_t seed, int samples = 20) {
    const Grid g(64);
    CounterRng rng(seed, 3);
    const InertiaSpec h0 = InertiaSpec::hk(0);
    const Field S = Field::sample(g, [](double x) { return std::sin(x); });
    const Field C = Field::sample(g, [](double x) { return std::cos(x); });
    const double sincos = std::abs(sectional(h0, S, C) - 2.0 / std::numbers::pi);

    double minsec = std::numeric_limits<double>::infinity();
    double vira = 0.0, opform = 0.0, secnum = 0.0, anti = 0.0, pair = 0.0, bianchi = 0.0;
    const std::vector<InertiaSpec> specs = {h0, InertiaSpec::hk(1), InertiaSpec::ga(0.5), h0.with_center()};
    for (int s = 0; s < samples; ++s) {
        minsec = std::min(minsec, sectional(h0, random_trig(g, rng), random_trig(g, rng)));
        const CentralVec x1 = detail::random_vec(g, rng, true), x2 = detail::random_vec(g, rng, true);
        const double q = curvature_quadruple(h0.with_center(), x1, x2, x1, x2);
        vira = std::max(vira, detail::rel(virasoro_curvature_form(x1.x, x1.a, x2.x, x2.a) - q, q));
        for (const auto& sp : specs) {
            const bool c = sp.extended();
            const CentralVec X = detail::random_vec(g, rng, c), Y = detail::random_vec(g, rng, c),
                             Z = detail::random_vec(g, rng, c), U = detail::random_vec(g, rng, c);
            const double qq = curvature_quadruple(sp, X, Y, Z, U);
            opform = std::max(opform, detail::rel(4.0 * inner(sp, curvature_operator(sp, X, Y, Z), U) - qq, qq));
            const double sn = curvature_quadruple(sp, X, Y, X, Y);
            secnum = std::max(secnum, detail::rel(curvature_sectional_numerator(sp, X, Y) - sn, sn));
            anti = std::max(anti, (curvature_operator(sp, X, Y, Z) + curvature_operator(sp, Y, X, Z)).max_abs());
            pair = std::max(pair, detail::rel(qq - curvature_quadruple(sp, Z, U, X, Y), qq));
            bianchi = std::max(bianchi, (curvature_operator(sp, X, Y, Z) + curvature_operator(sp, Y, Z, X) +
                                         curvature_operator(sp, Z, X, Y))
                                            .max_abs());
        }
    }
    return {at_most("Burgers sectional curvature of (sin, cos) equals 2/pi", sincos, 1e-10),
            at_least("Burgers sectional curvature non-negative", minsec, -1e-12),
            at_most("Virasoro closed form matches quadruple", vira, 1e-8),
            at_most("operator form matches quadruple", opform, 1e-9),
            at_most("sectional numerator matches quadruple", secnum, 1e-9),
            at_most("R(X,Y) antisymmetric", anti, 1e-9),
            at_most("pair symmetry", pair, 1e-9),
            at_most("first Bianchi identity", bianchi, 1e-9)};
}

inline std::vector<Check> verify_conservation(std::uint64_t /*seed*/) {
    struct Case {
        InertiaSpec spec;
        double a;
    };
    std::vector<Case> cases;
    for (const auto& sp : {InertiaSpec::hk(0), InertiaSpec::hk(1), InertiaSpec::hk(2), InertiaSpec::ga(1.0)})
        for (double a : {0.0, 0.5}) cases.push_back({sp, a});
    const Grid g(128);
    const Field u0 = Field::sample(g, [](double x) { return 0.1 * std::sin(x); });
    std::vector<std::future<std::pair<double, double>>> jobs;
    for (const auto& c : cases)
        jobs.push_back(std::async(std::launch::async, [&u0, c] {
            const Trajectory tr = solve(c.spec, u0, c.a, 1.0, 2e-3);
            if (tr.stop) return std::pair{std::numeric_limits<double>::infinity(), 0.0};
            return std::pair{momentum_drift(tr), energy_drift(tr)};
        }));
    std::vector<Check> out;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const auto [m, e] = jobs[i].get();
        const std::string tag = " (" + cases[i].spec.name() + ", a=" + (cases[i].a != 0.0 ? "0.5" : "0") + ")";
        out.push_back(at_most("momentum drift" + tag, m, 1e-5));
        out.push_back(at_most("energy drift" + tag, e, 1e-6));
    }
    return out;
}

inline std::vector<Check> verify_jacobi(std::uint64_t seed) {
    std::vector<Check> out;
    for (double a : {0.0, 0.5}) {
        const std::string tag = a == 0.0 ? " (Burgers)" : " (KdV a=0.5)";
        const Grid g(128);
        CounterRng rng(seed, a == 0.0 ? 4 : 5);
        const Field u0 = Field::sample(g, [](double x) { return 0.2 * std::sin(x); });
        const Trajectory tr = solve(InertiaSpec::hk(0), u0, a, 1.0, 1e-3);
        if (tr.stop) {
            out.push_back(at_most("trajectory completed" + tag, 1.0, 0.0));
            continue;
        }
        const auto y1 = random_trig(g, rng, 3, 0.5), v1 = random_trig(g, rng, 3, 0.5);
        const auto y2 = random_trig(g, rng, 3, 0.5), v2 = random_trig(g, rng, 3, 0.5);
        const auto j1 = solve_jacobi(tr, y1, v1, rng.uniform(-1, 1), rng.uniform(-1, 1));
        const auto j2 = solve_jacobi(tr, y2, v2, rng.uniform(-1, 1), rng.uniform(-1, 1));
        const double p0 = symplectic_pairing(tr.states[0].u, a, j1[0], j2[0]);
        double drift = 0.0, b1 = 0.0;
        for (std::size_t i = 0; i < j1.size(); ++i) {
            const Field& u = tr.states[i].u;
            drift = std::max(drift, std::abs(symplectic_pairing(u, a, j1[i], j2[i]) - p0));
            b1 = std::max({b1, b1_residual(j1[i], u), b1_residual(j2[i], u)});
        }
        out.push_back(at_most("symplectic pairing drift" + tag, drift, 1e-4));
        out.push_back(at_most("B1 residual" + tag, b1, 1e-5));
        out.push_back(at_most("covariant Jacobi equation residual" + tag, jacobi_equivalence_residual(tr, j1, 10), 1e-4));
        const Grid fine(256);
        const Field uf = Field::sample(fine, [](double x) { return 0.2 * std::sin(x); });
        out.push_back(at_most("time translation is a Jacobi field" + tag,
                              time_translation_residual(solve(InertiaSpec::hk(0), uf, a, 1.0, 1e-3), 5), 1e-6));
    }
    return out;
}

inline std::vector<Check> verify_vanish(std::uint64_t /*seed*/) {
    std::vector<Check> out;
    const std::vector<double> eps = {0.2, 0.1, 0.05};
    for (double e : eps) {
        const CompressionWave w(WaveSpec::with_eps(e));
        const PathMetrics m = basic_wave_metrics(w, 0.0, 1.0, wave_time_step(e));
        out.push_back(at_most("basic wave energy / bound (eps=" + detail::format_double(e) + ")",
                              m.energy / w.energy_bound(0.0, 1.0), 1.02));
    }
    const auto rows = vanishing_demo(Displacement::bump(0.3, 0.0, 1.0), {0.2, 0.1, 0.05, 0.025});
    double worst_ratio = 0.0, endpoint = 0.0, minjac = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i > 0) worst_ratio = std::max(worst_ratio, rows[i].length_bound / rows[i - 1].length_bound);
        endpoint = std::max(endpoint, rows[i].endpoint_error);
        minjac = std::min(minjac, rows[i].min_jacobian);
    }
    out.push_back(at_most("length bound ratio between successive eps", worst_ratio, 1.0 - 1e-3));
    out.push_back(at_most("path ends at the target", endpoint, 1e-12));
    out.push_back(at_least("every map stays a diffeomorphism", minjac, 1e-12));
    return out;
}

inline std::vector<Check> verify_convergence(std::uint64_t /*seed*/) {
    struct Case {
        std::string name;
        InertiaSpec spec;
        double a;
        double dt0;
    };
    const std::vector<Case> cases = {{"Burgers", InertiaSpec::hk(0), 0.0, 0.05},
                                     {"Camassa-Holm", InertiaSpec::hk(1), 0.0, 0.1},
                                     {"KdV", InertiaSpec::hk(0), 0.5, 0.02}};
    const Grid g(128);
    const Field u0 = Field::sample(g, [](double x) { return 0.1 * std::sin(x) + 0.05 * std::cos(2.0 * x); });
    std::vector<Check> out;
    for (const auto& c : cases) {
        double order = std::numeric_limits<double>::quiet_NaN();
        try {
            order = self_convergence(c.spec, u0, c.a, 0.5, c.dt0, 4).orders.back();
        } catch (const NumericalError&) {
        }
        out.push_back(within("RK4 self-convergence order (" + c.name + ")", order, 3.5, 4.5));
    }
    return out;
}

inline std::vector<Check> run_suite(const std::string& suite, std::uint64_t seed) {
    if (suite == "algebra") return verify_algebra(seed);
    if (suite == "cocycles") return verify_cocycles(seed);
    if (suite == "curvature") return verify_curvature(seed);
    if (suite == "conservation") return verify_conservation(seed);
    if (suite == "jacobi") return verify_jacobi(seed);
    if (suite == "vanish") return verify_vanish(seed);
    if (suite == "convergence") return verify_convergence(seed);
    throw InvalidArgument("verify: unknown suite '" + suite + "'");
}

/// {"suite", "seed", "passed", "properties": [{"property", "residual", "lower", "upper", "pass"}]}
inline nlohmann::json suite_report(const std::string& suite, std::uint64_t seed, const std::vector<Check>& checks) {
    nlohmann::json props = nlohmann::json::array();
    bool all = true;
    for (const auto& c : checks) {
        all = all && c.passed();
        props.push_back({{"property", c.property},
                         {"residual", std::isfinite(c.residual) ? nlohmann::json(c.residual) : nlohmann::json(nullptr)},
                         {"lower", c.lower ? nlohmann::json(*c.lower) : nlohmann::json(nullptr)},
                         {"upper", c.upper ? nlohmann::json(*c.upper) : nlohmann::json(nullptr)},
                         {"pass", c.passed()}});
    }
    return {{"suite", suite}, {"seed", seed}, {"passed", all}, {"properties", props}};
}

} // namespace geoflow
