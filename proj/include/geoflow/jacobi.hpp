#pragma once
// Jacobi fields along H^0 geodesics (Burgers for a = 0, KdV for a != 0) and
// their conserved weak-symplectic pairing.
//
// solve_jacobi integrates the first-order form
//   y_t = w + [u, y],   w_t = -3 (u w)_x - a w_xxx - B1 u_xxx,
// where w is the variation of the Eulerian velocity. Eliminating w gives the
// second-order equation evaluated by jacobi_rhs_kdv.

#include "geoflow/flow.hpp"
#include "geoflow/metrics.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <string>
#include <vector>

namespace geoflow {

struct JacobiState {
    double t = 0.0;
    Field y;
    Field yt;
    double b = 0.0;
    double bt = 0.0;
    /// b_t + int y_xxx u, constant along the flow.
    double B1 = 0.0;
};

/// y_tt = -3u^2 y_xx - 4u y_tx - 2u_x y_t.
inline Field jacobi_rhs_burgers(const Field& u, const Field& y, const Field& yt) {
    require_same_grid(u, y, "jacobi_rhs_burgers");
    require_same_grid(u, yt, "jacobi_rhs_burgers");
    return -3.0 * u * u * deriv(y, 2) - 4.0 * u * deriv(yt, 1) - 2.0 * deriv(u, 1) * yt;
}

/// y_tt = -u(4y_tx + 3u y_xx + a y_xxxx) - u_x(2y_t + 2a y_xxx) - u_xxx(B1 - 3a y_x) - a y_txxx.
inline Field jacobi_rhs_kdv(const Field& u, double a, const Field& y, const Field& yt, double B1) {
    require_same_grid(u, y, "jacobi_rhs_kdv");
    require_same_grid(u, yt, "jacobi_rhs_kdv");
    const Field yx = deriv(y, 1);
    Field out = -u * (4.0 * deriv(yt, 1) + 3.0 * u * deriv(y, 2)) - deriv(u, 1) * (2.0 * yt) - B1 * deriv(u, 3);
    if (a != 0.0) {
        out -= a * (u * deriv(y, 4) + 2.0 * deriv(u, 1) * deriv(y, 3) - 3.0 * deriv(u, 3) * yx + deriv(yt, 3));
    }
    return out;
}

/// y_tt = [ad(y)^T + ad(y), ad(u)^T] u - ad(u)^T y_t - alpha(u) y_t + ad(u) y_t, any metric.
inline CentralVec jacobi_rhs_generic(const InertiaSpec& spec, const CentralVec& u, const CentralVec& y,
                                     const CentralVec& yt) {
    auto P = [&](const CentralVec& z) { return ad_transpose(spec, y, z) + ad(spec, y, z); };
    auto Q = [&](const CentralVec& z) { return ad_transpose(spec, u, z); };
    const CentralVec comm = P(Q(u)) - Q(P(u));
    return comm - ad_transpose(spec, u, yt) - alpha_op(spec, u, yt) + ad(spec, u, yt);
}

/// int y_xxx u.
inline double omega_yu(const Field& y, const Field& u) { return quad(deriv(y, 3) * u); }

/// int (y z_t - y_t z + 2u(y z_x - y_x z)) + b C1 - c B1 - a int y' z''.
inline double symplectic_pairing(const Field& u, double a, const JacobiState& j1, const JacobiState& j2) {
    require_same_grid(u, j1.y, "symplectic_pairing");
    require_same_grid(u, j2.y, "symplectic_pairing");
    const Field& y = j1.y;
    const Field& z = j2.y;
    double s = quad(y * j2.yt - j1.yt * z + 2.0 * u * (y * deriv(z, 1) - deriv(y, 1) * z));
    s += j1.b * j2.B1 - j2.b * j1.B1;
    if (a != 0.0) s -= a * gelfand_fuchs(y, z);
    return s;
}

namespace detail {

struct JacobiVars {
    Field y;
    Field w;
    double b = 0.0;
    double bt = 0.0;
};

inline JacobiVars axpy(const JacobiVars& x, double h, const JacobiVars& k) {
    return {x.y + h * k.y, x.w + h * k.w, x.b + h * k.b, x.bt + h * k.bt};
}

} // namespace detail

/// Integrate a Jacobi field along an H^0 trajectory on its stored time grid.
/// u between samples is the cubic Hermite interpolant built from u and u_t.
/// The central velocity bt is integrated from its own second-order equation,
/// so bt + int y_xxx u - B1 is an independent consistency residual.
inline std::vector<JacobiState> solve_jacobi(const Trajectory& traj, const Field& y0, const Field& yt0,
                                             double b0, double bt0) {
    if (traj.spec.order() != 0) throw InvalidArgument("solve_jacobi: only the H^0 metric has a dedicated solver");
    if (traj.states.size() < 2) throw InvalidArgument("solve_jacobi: trajectory needs at least two states");
    const Grid& grid = traj.grid();
    if (!(y0.grid() == grid) || !(yt0.grid() == grid))
        throw InvalidArgument("solve_jacobi: initial data and trajectory use different grids");
    const double a = traj.a;
    const double h = traj.dt;
    double umax = 0.0;
    for (const auto& s : traj.states) umax = std::max(umax, s.u.max_abs());
    const double cfl = 3.0 * h * umax * grid.wavenumber(grid.nyquist());
    if (cfl > 2.5) throw InvalidArgument("solve_jacobi: trajectory too coarse in time (advective CFL " +
                                         std::to_string(cfl) + ")");

    const Field& u0 = traj.states.front().u;
    const double B1 = bt0 + omega_yu(y0, u0);

    auto F = [&](const Field& u, const detail::JacobiVars& v) {
        detail::JacobiVars k;
        k.y = v.w + field_bracket(u, v.y);
        k.w = -3.0 * deriv(dealias(u * v.w), 1) - B1 * deriv(u, 3);
        k.b = v.bt;
        const Field ux = deriv(u, 1);
        Field flux = 3.0 * ux * u;
        if (a != 0.0) flux += a * deriv(u, 3);
        k.bt = quad(-deriv(k.y, 3) * u + deriv(v.y, 3) * flux);
        return k;
    };
    auto E = [&](const detail::JacobiVars& v, double tau) {
        detail::JacobiVars out = v;
        if (a != 0.0) out.w = apply_spectral(v.w, [&](double xi) { return std::exp(Complex(0.0, a * xi * xi * xi * tau)); });
        return out;
    };
    auto to_state = [&](double t, const Field& u, const detail::JacobiVars& v) {
        JacobiState s;
        s.t = t;
        s.y = v.y;
        s.yt = v.w + field_bracket(u, v.y);
        s.b = v.b;
        s.bt = v.bt;
        s.B1 = B1;
        return s;
    };

    detail::JacobiVars v{y0, yt0 - field_bracket(u0, y0), b0, bt0};
    std::vector<JacobiState> out;
    out.reserve(traj.states.size());
    out.push_back(to_state(traj.states.front().t, u0, v));

    Field ut_prev = rhs(traj.spec, u0, a);
    for (std::size_t n = 0; n + 1 < traj.states.size(); ++n) {
        const Field& ua = traj.states[n].u;
        const Field& ub = traj.states[n + 1].u;
        const Field ut_next = rhs(traj.spec, ub, a);
        const Field um = 0.5 * (ua + ub) + (h / 8.0) * (ut_prev - ut_next);

        // Lawson RK4 with the dispersive part of w propagated exactly.
        const auto k1 = F(ua, v);
        const auto k2 = F(um, E(detail::axpy(v, h / 2, k1), h / 2));
        const auto k3 = F(um, detail::axpy(E(v, h / 2), h / 2, k2));
        const auto k4 = F(ub, detail::axpy(E(v, h), h, E(k3, h / 2)));
        const auto e1 = E(k1, h);
        const auto e23 = E(detail::axpy(k2, 1.0, k3), h / 2);
        auto vn = E(v, h);
        vn = detail::axpy(vn, h / 6, e1);
        vn = detail::axpy(vn, h / 3, e23);
        vn = detail::axpy(vn, h / 6, k4);
        if (!vn.y.all_finite() || !vn.w.all_finite() || !std::isfinite(vn.b) || !std::isfinite(vn.bt))
            throw NumericalError("solve_jacobi: non-finite Jacobi field at t = " +
                                 std::to_string(traj.states[n + 1].t));
        v = std::move(vn);
        out.push_back(to_state(traj.states[n + 1].t, ub, v));
        ut_prev = ut_next;
    }
    return out;
}

/// Sup over interior samples of |u_tt - rhs(u, a; y = u, y_t = u_t)|: the time translation
/// y = u is a Jacobi field with B1 = 0. With u_t = N(u) - a u_xxx, the dispersive part of
/// u_tt is applied exactly and d/dt N(u) is a fourth-order centred difference along the
/// trajectory, so fast dispersive phases never enter a difference quotient.
inline double time_translation_residual(const Trajectory& traj, std::size_t stride = 1) {
    if (traj.spec.order() != 0) throw InvalidArgument("time_translation_residual: H^0 trajectories only");
    if (traj.states.size() < 5) throw InvalidArgument("time_translation_residual: need at least five states");
    std::vector<Field> nl;
    nl.reserve(traj.states.size());
    for (const auto& s : traj.states) nl.push_back(rhs_nonlinear(traj.spec, s.u));
    const double a = traj.a;
    const double h = traj.dt;
    double worst = 0.0;
    for (std::size_t i = 2; i + 2 < nl.size(); i += std::max<std::size_t>(stride, 1)) {
        const Field& u = traj.states[i].u;
        const Field ut = rhs(traj.spec, u, a);
        Field utt = (1.0 / (12.0 * h)) * (8.0 * (nl[i + 1] - nl[i - 1]) - (nl[i + 2] - nl[i - 2]));
        if (a != 0.0) utt -= a * deriv(ut, 3);
        worst = std::max(worst, (utt - jacobi_rhs_kdv(u, a, u, ut, 0.0)).max_abs());
    }
    return worst;
}

/// |bt + int y_xxx u - B1|.
inline double b1_residual(const JacobiState& j, const Field& u) {
    return std::abs(j.bt + omega_yu(j.y, u) - j.B1);
}

struct JacobiRow {
    double t;
    double pairing;
    /// |pairing(t) - pairing(0)|.
    double pairing_drift;
    double b1_residual;
    double y_sup;
};

/// CSV with header "t,pairing,pairing_drift,b1_residual,y_sup".
inline void write_jacobi_csv(const std::string& path, const std::vector<JacobiRow>& rows) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os.imbue(std::locale::classic());
    os << "t,pairing,pairing_drift,b1_residual,y_sup\n" << std::setprecision(17);
    for (const auto& r : rows)
        os << r.t << ',' << r.pairing << ',' << r.pairing_drift << ',' << r.b1_residual << ',' << r.y_sup << '\n';
    if (!os) throw std::runtime_error("write failed for " + path);
}

} // namespace geoflow
