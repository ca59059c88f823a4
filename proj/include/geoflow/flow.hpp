#pragma once
// Geodesic flow u_t = -ad(u,a)^T (u,a) in Eulerian form, lifted to the
// Lagrangian map g_t = u o g and the central coordinate, with the conserved
// momentum and energy diagnostics and the Burgers characteristics oracle.

#include "geoflow/diffeo.hpp"
#include "geoflow/metrics.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace geoflow {

struct GeodesicState {
    double t = 0.0;
    Field u;
    double a = 0.0;
    Diffeo lag;
    double alpha = 0.0;
};

struct StopReport {
    double time = 0.0;
    double min_jacobian = 0.0;
    std::string reason;
};

struct Trajectory {
    InertiaSpec spec;
    double a = 0.0;
    double dt = 0.0;
    std::string integrator;
    std::vector<GeodesicState> states;
    std::optional<StopReport> stop;

    const Grid& grid() const { return states.front().u.grid(); }
    double final_time() const { return states.back().t; }
};

struct StepOptions {
    /// Stop when min g_x falls to this value.
    double jacobian_margin = 1e-2;
    /// Stop when the upper quarter of the retained band holds more than this
    /// fraction of the largest Fourier coefficient of u.
    double resolution_tol = 1e-6;
};

/// B(u) = A(u u_x) - u A(u_x) = sum_i c_i (-1)^i sum_{j=1}^{2i} C(2i,j) d^j u d^{2i-j+1} u.
inline Field leibniz_commutator(const InertiaSpec& spec, const Field& u) {
    const int top = 2 * spec.order();
    Field out(u.grid());
    if (top == 0) return out;
    std::vector<Field> d(static_cast<std::size_t>(top) + 1);
    d[0] = u;
    for (int j = 1; j <= top; ++j) d[j] = deriv(d[j - 1], 1);
    const auto& c = spec.coeffs();
    for (int i = 1; i <= spec.order(); ++i) {
        if (c[i] == 0.0) continue;
        const double sign = (i % 2 == 0) ? 1.0 : -1.0;
        double binom = 1.0;
        for (int j = 1; j <= 2 * i; ++j) {
            binom = binom * (2 * i - j + 1) / j;
            out += (sign * c[i] * binom) * (d[j] * d[2 * i - j + 1]);
        }
    }
    return dealias(out);
}

/// Linear part symbol: u_t = -a A^{-1} u_xxx has symbol i a xi^3 / P(xi).
inline Complex linear_symbol(const InertiaSpec& spec, double a, double xi) {
    return Complex(0.0, a * xi * xi * xi / spec.symbol(xi));
}

/// Everything except the dispersive -a A^{-1} u_xxx term.
inline Field rhs_nonlinear(const InertiaSpec& spec, const Field& u) {
    const Field ux = deriv(u, 1);
    Field adv = dealias(u * ux);
    if (spec.order() == 0) return -3.0 * adv;
    const Field inner_part = dealias(2.0 * ux * apply_inertia(spec, u)) - leibniz_commutator(spec, u);
    return -adv - apply_inertia_inverse(spec, inner_part);
}

/// u_t = -u u_x - A^{-1}(2 u_x A(u) - B(u) + a u_xxx).
inline Field rhs(const InertiaSpec& spec, const Field& u, double a) {
    Field out = rhs_nonlinear(spec, u);
    if (a != 0.0) out -= a * apply_inertia_inverse(spec, deriv(u, 3));
    return out;
}

namespace detail {

inline Field propagate(const InertiaSpec& spec, double a, const Field& u, double h) {
    if (a == 0.0) return u;
    return apply_spectral(u, [&](double xi) { return std::exp(h * linear_symbol(spec, a, xi)); });
}

inline double alpha_rate(double a, const Field& u, const Field& disp) {
    const Grid& g = u.grid();
    const Field jac = 1.0 + deriv(disp, 1);
    const Field g2 = deriv(disp, 2);
    const Field uxg = interp_shifted(deriv(u, 1), disp);
    Field integrand(g);
    for (std::size_t j = 0; j < g.size(); ++j) integrand[j] = uxg[j] * g2[j] / (2.0 * jac[j]);
    return a + quad(integrand);
}

inline double resolution_ratio(const Field& u) {
    const auto c = spectrum(u);
    double all = 0.0, top = 0.0;
    const std::size_t band = static_cast<std::size_t>(2.0 / 3.0 * static_cast<double>(u.grid().nyquist()));
    const std::size_t start = band * 3 / 4;
    for (std::size_t m = 0; m < c.size(); ++m) {
        const double v = std::abs(c[m]);
        all = std::max(all, v);
        if (m >= start && m <= band) top = std::max(top, v);
    }
    return all > 0.0 ? top / all : 0.0;
}

} // namespace detail

/// One integrating-factor RK4 (Lawson) step for (u, g, alpha). With a = 0 it is classical RK4.
inline GeodesicState step(const InertiaSpec& spec, const GeodesicState& s, double dt,
                          const StepOptions& opt = {}) {
    if (!(dt > 0.0)) throw InvalidArgument("step: dt must be positive");
    const double a = s.a;
    const double h = dt;
    const Field& u0 = s.u;
    const Field& d0 = s.lag.disp();
    auto N = [&](const Field& u) { return rhs_nonlinear(spec, u); };
    auto V = [&](const Field& u, const Field& d) { return interp_shifted(u, d); };
    auto E = [&](const Field& f, double tau) { return detail::propagate(spec, a, f, tau); };

    const Field k1 = N(u0);
    const Field l1 = V(u0, d0);
    const double m1 = detail::alpha_rate(a, u0, d0);

    const Field u2 = E(u0 + (h / 2) * k1, h / 2);
    const Field d2 = d0 + (h / 2) * l1;
    const Field k2 = N(u2);
    const Field l2 = V(u2, d2);
    const double m2 = detail::alpha_rate(a, u2, d2);

    const Field eu_half = E(u0, h / 2);
    const Field u3 = eu_half + (h / 2) * k2;
    const Field d3 = d0 + (h / 2) * l2;
    const Field k3 = N(u3);
    const Field l3 = V(u3, d3);
    const double m3 = detail::alpha_rate(a, u3, d3);

    const Field u4 = E(u0, h) + h * E(k3, h / 2);
    const Field d4 = d0 + h * l3;
    const Field k4 = N(u4);
    const Field l4 = V(u4, d4);
    const double m4 = detail::alpha_rate(a, u4, d4);

    Field un = E(u0, h) + (h / 6) * (E(k1, h) + 2.0 * E(k2 + k3, h / 2) + k4);
    Field dn = d0 + (h / 6) * (l1 + 2.0 * l2 + 2.0 * l3 + l4);
    const double t1 = s.t + h;

    if (!un.all_finite() || !dn.all_finite())
        throw ShockDetected("step: non-finite state", t1, std::nan(""));
    const double minjac = (1.0 + deriv(dn, 1)).min();
    if (minjac <= opt.jacobian_margin)
        throw ShockDetected("step: Lagrangian map about to fold", t1, minjac);
    if (detail::resolution_ratio(un) > opt.resolution_tol)
        throw ShockDetected("step: velocity no longer resolved on the grid", t1, minjac);

    GeodesicState out;
    out.t = t1;
    out.u = std::move(un);
    out.a = a;
    out.lag = Diffeo(std::move(dn));
    out.alpha = s.alpha + (h / 6) * (m1 + 2 * m2 + 2 * m3 + m4);
    return out;
}

inline GeodesicState initial_state(const Field& u0, double a) {
    GeodesicState s;
    s.t = 0.0;
    s.u = u0;
    s.a = a;
    s.lag = Diffeo::identity(u0.grid());
    s.alpha = 0.0;
    return s;
}

/// Integrate from (0, u0, id, 0) to T with a uniform step. On a detected shock the
/// trajectory is truncated at the last valid state and `stop` records why.
inline Trajectory solve(const InertiaSpec& spec, const Field& u0, double a, double T, double dt,
                        const StepOptions& opt = {}) {
    if (!(T >= 0.0) || !std::isfinite(T)) throw InvalidArgument("solve: horizon must be finite and >= 0");
    if (!(dt > 0.0)) throw InvalidArgument("solve: dt must be positive");
    if (!u0.all_finite()) throw InvalidArgument("solve: initial velocity not finite");
    Trajectory tr;
    tr.spec = spec;
    tr.a = a;
    tr.dt = dt;
    tr.integrator = (a != 0.0) ? "if-rk4" : "rk4";
    const auto steps = static_cast<std::size_t>(std::llround(T / dt));
    if (std::abs(static_cast<double>(steps) * dt - T) > 1e-9 * std::max(1.0, T))
        throw InvalidArgument("solve: horizon must be an integer multiple of dt");
    tr.states.reserve(steps + 1);
    tr.states.push_back(initial_state(u0, a));
    for (std::size_t i = 0; i < steps; ++i) {
        try {
            GeodesicState next = step(spec, tr.states.back(), dt, opt);
            next.t = static_cast<double>(i + 1) * dt;
            tr.states.push_back(std::move(next));
        } catch (const ShockDetected& e) {
            tr.stop = StopReport{e.time(), e.min_derivative(), e.what()};
            break;
        }
    }
    return tr;
}

/// J = g_x^2 (A u) o g + a S(g), central part a.
inline CentralVec momentum(const InertiaSpec& spec, const GeodesicState& s) {
    const Field& gx = s.lag.jacobian();
    Field field = gx * gx * pullback(apply_inertia(spec, s.u), s.lag);
    if (s.a != 0.0) field += s.a * schwarzian(s.lag);
    return {std::move(field), s.a};
}

/// <(u,a),(u,a)>.
inline double energy(const InertiaSpec& spec, const GeodesicState& s) {
    return inner(spec, CentralVec(s.u, s.a), CentralVec(s.u, s.a));
}

/// max_t |J(t) - J(0)|_inf / |J(0)|_inf.
inline double momentum_drift(const Trajectory& tr) {
    const CentralVec j0 = momentum(tr.spec, tr.states.front());
    const double scale = j0.max_abs();
    double worst = 0.0;
    for (const auto& s : tr.states) worst = std::max(worst, (momentum(tr.spec, s) - j0).max_abs());
    return scale > 0.0 ? worst / scale : worst;
}

/// max_t |E(t) - E(0)| / E(0).
inline double energy_drift(const Trajectory& tr) {
    const double e0 = energy(tr.spec, tr.states.front());
    double worst = 0.0;
    for (const auto& s : tr.states) worst = std::max(worst, std::abs(energy(tr.spec, s) - e0));
    return e0 > 0.0 ? worst / e0 : worst;
}

/// First time z -> z + 3t u0(z) stops being monotone, +inf if never.
inline double shock_time(const Field& u0) {
    const Field d1 = deriv(u0, 1);
    std::size_t jmin = 0;
    for (std::size_t j = 1; j < d1.size(); ++j)
        if (d1[j] < d1[jmin]) jmin = j;
    double mn = d1[jmin];
    // Refine the minimum of u0' with Newton on u0'' = 0.
    const auto c2 = spectrum(deriv(u0, 2));
    const auto c3 = spectrum(deriv(u0, 3));
    const auto c1 = spectrum(d1);
    const Grid& g = u0.grid();
    double z = g.node(jmin);
    for (int it = 0; it < 30; ++it) {
        const double f3 = eval_spectrum(g, c3, z);
        if (!(f3 > 0.0)) break;
        const double dz = eval_spectrum(g, c2, z) / f3;
        if (std::abs(dz) > g.spacing()) break;
        z -= dz;
        if (std::abs(dz) < 1e-15) break;
    }
    mn = std::min(mn, eval_spectrum(g, c1, z));
    if (mn >= 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / (3.0 * -mn);
}

/// Burgers solution u(t, x) = u0(z) with x = z + 3 t u0(z), evaluated at targets.
inline std::vector<double> characteristics(const Field& u0, double t, std::span<const double> targets) {
    if (!(t >= 0.0)) throw InvalidArgument("characteristics: t must be >= 0");
    if (t >= shock_time(u0)) throw NumericalError("characteristics: t is past the shock time");
    const Grid& g = u0.grid();
    const double L = g.length();
    const std::size_t n = g.size();
    const auto c0 = spectrum(u0);
    const auto c1 = spectrum(deriv(u0, 1));
    std::vector<double> X(n + 1), Z(n + 1);
    for (std::size_t j = 0; j < n; ++j) {
        Z[j] = g.node(j);
        X[j] = Z[j] + 3.0 * t * u0[j];
    }
    Z[n] = Z[0] + L;
    X[n] = X[0] + L;
    auto F = [&](double z) { return z + 3.0 * t * eval_spectrum(g, c0, z); };
    auto dF = [&](double z) { return 1.0 + 3.0 * t * eval_spectrum(g, c1, z); };

    std::vector<double> out(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i) {
        double x = targets[i];
        const double shift = std::floor((x - X[0]) / L) * L;
        x -= shift;
        auto it = std::upper_bound(X.begin(), X.end(), x);
        std::size_t k = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(it - X.begin(), 1, n)) - 1;
        double lo = Z[k], hi = Z[k + 1];
        double z = lo + (hi - lo) * (x - X[k]) / (X[k + 1] - X[k]);
        for (int iter = 0; iter < 60; ++iter) {
            const double r = F(z) - x;
            if (r > 0.0) hi = std::min(hi, z); else lo = std::max(lo, z);
            double zn = z - r / dF(z);
            if (!(zn > lo && zn < hi)) zn = 0.5 * (lo + hi);
            if (std::abs(zn - z) < 1e-15 * (1.0 + std::abs(z))) {
                z = zn;
                break;
            }
            z = zn;
        }
        out[i] = eval_spectrum(g, c0, z);
    }
    return out;
}

inline Field characteristics(const Field& u0, double t) {
    const auto x = u0.grid().nodes();
    return Field(u0.grid(), characteristics(u0, t, x));
}

struct ConvergenceStudy {
    std::vector<double> dts;
    /// diffs[i] = |u_T(dts[i]) - u_T(dts[i+1])|_inf.
    std::vector<double> diffs;
    /// log2(diffs[i] / diffs[i+1]).
    std::vector<double> orders;
};

/// Step-halving self-convergence of u at time T, starting from dt0 and halving levels-1 times.
inline ConvergenceStudy self_convergence(const InertiaSpec& spec, const Field& u0, double a, double T, double dt0,
                                         int levels = 3) {
    if (levels < 3) throw InvalidArgument("self_convergence: need at least three levels");
    ConvergenceStudy st;
    std::vector<Field> finals;
    double dt = dt0;
    for (int l = 0; l < levels; ++l, dt /= 2) {
        const Trajectory tr = solve(spec, u0, a, T, dt);
        if (tr.stop) throw NumericalError("self_convergence: run stopped early (" + tr.stop->reason + ")");
        st.dts.push_back(dt);
        finals.push_back(tr.states.back().u);
    }
    for (std::size_t i = 0; i + 1 < finals.size(); ++i) st.diffs.push_back((finals[i] - finals[i + 1]).max_abs());
    for (std::size_t i = 0; i + 1 < st.diffs.size(); ++i) st.orders.push_back(std::log2(st.diffs[i] / st.diffs[i + 1]));
    return st;
}

/// CSV: header "t,u0,...,u{n-1}", one row per stored state.
inline void write_trajectory_csv(const std::string& path, const Trajectory& tr) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os.imbue(std::locale::classic());
    os << "t";
    for (std::size_t j = 0; j < tr.grid().size(); ++j) os << ",u" << j;
    os << '\n' << std::setprecision(17);
    for (const auto& s : tr.states) {
        os << s.t;
        for (double v : s.u.values()) os << ',' << v;
        os << '\n';
    }
    if (!os) throw std::runtime_error("write failed for " + path);
}

inline nlohmann::json trajectory_summary(const Trajectory& tr, double horizon) {
    // The characteristics prediction only applies to Burgers.
    const bool burgers = tr.spec.order() == 0 && tr.a == 0.0;
    const double ts = burgers ? shock_time(tr.states.front().u) : std::numeric_limits<double>::infinity();
    nlohmann::json j;
    j["spec"] = tr.spec.name();
    j["n"] = tr.grid().size();
    j["dt"] = tr.dt;
    j["T"] = horizon;
    j["a"] = tr.a;
    j["integrator"] = tr.integrator;
    j["final_time"] = tr.final_time();
    j["momentum_drift"] = momentum_drift(tr);
    j["energy_drift"] = energy_drift(tr);
    j["shock_time"] = std::isfinite(ts) ? nlohmann::json(ts) : nlohmann::json(nullptr);
    if (tr.stop) {
        j["exit_reason"] = "shock";
        j["stop"] = {{"time", tr.stop->time},
                     {"min_jacobian", std::isfinite(tr.stop->min_jacobian) ? nlohmann::json(tr.stop->min_jacobian)
                                                                           : nlohmann::json(nullptr)},
                     {"message", tr.stop->reason}};
    } else {
        j["exit_reason"] = "completed";
    }
    return j;
}

} // namespace geoflow
