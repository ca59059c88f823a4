#pragma once
// Curvature of right-invariant metrics: the operator form, the quadruple
// expansion in brackets and ad-transposes, sectional curvature, the closed
// Virasoro integral, and the flat Christoffel/curvature of Emb(R, R).

#include "geoflow/diffeo.hpp"
#include "geoflow/jacobi.hpp"
#include "geoflow/metrics.hpp"

#include <cmath>
#include <string>

namespace geoflow {

/// Gamma_f(h, k) = -(h k)_x / f_x.
inline Field christoffel_emb(const Diffeo& f, const Field& h, const Field& k) {
    require_same_grid(f.disp(), h, "christoffel_emb");
    require_same_grid(h, k, "christoffel_emb");
    return -deriv(h * k, 1) / f.jacobian();
}

/// R_f(h, k) l in closed form.
inline Field curvature_emb(const Diffeo& f, const Field& h, const Field& k, const Field& l) {
    require_same_grid(f.disp(), h, "curvature_emb");
    require_same_grid(h, k, "curvature_emb");
    require_same_grid(h, l, "curvature_emb");
    const Field& fx = f.jacobian();
    const Field fxx = deriv(f.disp(), 2);
    const Field hx = deriv(h, 1), hxx = deriv(h, 2);
    const Field kx = deriv(k, 1), kxx = deriv(k, 2);
    const Field lx = deriv(l, 1);
    Field out(h.grid());
    for (std::size_t j = 0; j < out.size(); ++j) {
        const double a = fx[j], b = fxx[j];
        const double num = b * hx[j] * k[j] * l[j] - b * h[j] * kx[j] * l[j] + a * h[j] * kxx[j] * l[j] -
                           a * hxx[j] * k[j] * l[j] + 2.0 * a * h[j] * kx[j] * lx[j] -
                           2.0 * a * hx[j] * k[j] * lx[j];
        out[j] = num / (a * a * a);
    }
    return out;
}

namespace detail {

struct Operators {
    const InertiaSpec& spec;
    CentralVec P(const CentralVec& x, const CentralVec& z) const { return ad_transpose(spec, x, z) + ad(spec, x, z); }
    CentralVec M(const CentralVec& x, const CentralVec& z) const { return ad_transpose(spec, x, z) - ad(spec, x, z); }
    CentralVec al(const CentralVec& x, const CentralVec& z) const { return alpha_op(spec, x, z); }
};

} // namespace detail

/// R(X,Y)Z = -1/4 [P(X), P(Y)] Z + 1/4 [M(X), alpha(Y)] Z + 1/4 [alpha(X), M(Y)] Z
///           + 1/4 [alpha(X), alpha(Y)] Z + 1/2 alpha([X,Y]) Z
/// with P = ad^T + ad, M = ad^T - ad and operator commutators.
inline CentralVec curvature_operator(const InertiaSpec& spec, const CentralVec& X, const CentralVec& Y,
                                     const CentralVec& Z) {
    const detail::Operators op{spec};
    CentralVec r = -0.25 * (op.P(X, op.P(Y, Z)) - op.P(Y, op.P(X, Z)));
    r += 0.25 * (op.M(X, op.al(Y, Z)) - op.al(Y, op.M(X, Z)));
    r += 0.25 * (op.al(X, op.M(Y, Z)) - op.M(Y, op.al(X, Z)));
    r += 0.25 * (op.al(X, op.al(Y, Z)) - op.al(Y, op.al(X, Z)));
    r += 0.5 * op.al(ad(spec, X, Y), Z);
    return r;
}

/// gamma(4 R(X,Y) Z, U) expanded into brackets and ad-transposes.
inline double curvature_quadruple(const InertiaSpec& spec, const CentralVec& X, const CentralVec& Y,
                                  const CentralVec& Z, const CentralVec& U) {
    auto g = [&](const CentralVec& p, const CentralVec& q) { return inner(spec, p, q); };
    auto br = [&](const CentralVec& p, const CentralVec& q) { return ad(spec, p, q); };
    auto at = [&](const CentralVec& p, const CentralVec& q) { return ad_transpose(spec, p, q); };
    double s = 0.0;
    s += 2.0 * g(br(X, Y), br(Z, U));
    s -= g(br(Y, Z), br(X, U));
    s += g(br(X, Z), br(Y, U));
    s -= g(Z, br(U, br(X, Y)));
    s += g(U, br(Z, br(X, Y)));
    s -= g(Y, br(X, br(U, Z)));
    s -= g(X, br(Y, br(Z, U)));
    s += g(at(X, Z), at(Y, U));
    s += g(at(X, Z), at(U, Y));
    s += g(at(Z, X), at(Y, U));
    s -= g(at(U, X), at(Y, Z));
    s -= g(at(Y, Z), at(X, U));
    s -= g(at(Z, Y), at(X, U));
    s -= g(at(U, X), at(Z, Y));
    s += g(at(U, Y), at(Z, X));
    return s;
}

/// 4 gamma(R(X,Y)X, Y) in the form specialised to sectional curvature.
inline double curvature_sectional_numerator(const InertiaSpec& spec, const CentralVec& X, const CentralVec& Y) {
    auto g = [&](const CentralVec& p, const CentralVec& q) { return inner(spec, p, q); };
    const CentralVec adxy = ad(spec, X, Y);
    const CentralVec adyx = ad(spec, Y, X);
    const CentralVec atxy = ad_transpose(spec, X, Y);
    const CentralVec atyx = ad_transpose(spec, Y, X);
    const CentralVec sum = atxy + atyx;
    return 3.0 * g(adxy, adxy) - 2.0 * g(atyx, adxy) - 2.0 * g(atxy, adyx) +
           4.0 * g(ad_transpose(spec, X, X), ad_transpose(spec, Y, Y)) - g(sum, sum);
}

/// k(X ^ Y) = -gamma(R(X,Y)X, Y) / (|X|^2 |Y|^2 - <X,Y>^2), non-negative for Burgers.
inline double sectional(const InertiaSpec& spec, const CentralVec& X, const CentralVec& Y,
                        double degenerate_tol = 1e-12) {
    const double xx = inner(spec, X, X), yy = inner(spec, Y, Y), xy = inner(spec, X, Y);
    const double denom = xx * yy - xy * xy;
    if (!(denom > degenerate_tol * std::max(1.0, xx * yy)))
        throw InvalidArgument("sectional: X and Y span a degenerate plane");
    return -(curvature_quadruple(spec, X, Y, X, Y) / 4.0) / denom;
}

/// Closed form of gamma(4 R(X1,X2) X1, X2) for the H^0 metric on the extended algebra.
inline double virasoro_curvature_form(const Field& X1, double a1, const Field& X2, double a2) {
    require_same_grid(X1, X2, "virasoro_curvature_form");
    const Field d1[5] = {X1, deriv(X1, 1), deriv(X1, 2), deriv(X1, 3), deriv(X1, 4)};
    const Field d2[5] = {X2, deriv(X2, 1), deriv(X2, 2), deriv(X2, 3), deriv(X2, 4)};
    const Field br = d1[1] * X2 - X1 * d2[1];
    const Field mix = X1 * d2[4] - d1[1] * d2[3] + d1[3] * d2[1] - d1[4] * X2;
    Field integrand = -4.0 * br * br + 4.0 * (a1 * X2 - a2 * X1) * mix - (a1 * a1) * d2[3] * d2[3] +
                      (2.0 * a1 * a2) * d1[3] * d2[3] - (a2 * a2) * d1[3] * d1[3];
    const double w = gelfand_fuchs(X1, X2);
    return quad(integrand) + 3.0 * w * w;
}

/// Covariant derivative along a curve g(t) with velocity u of the field Z(t):
/// Z_t + 1/2 ad(u)^T Z + 1/2 alpha(u) Z - 1/2 ad(u) Z.
inline CentralVec covariant_along(const InertiaSpec& spec, const CentralVec& u, const CentralVec& Z,
                                  const CentralVec& Zt) {
    return Zt + 0.5 * (ad_transpose(spec, u, Z) + alpha_op(spec, u, Z) - ad(spec, u, Z));
}

/// Sup norm of nabla_t nabla_t y + R(y,u) u at interior samples of a Jacobi solution,
/// with the outer time derivative taken by fourth-order centred differences.
inline double jacobi_equivalence_residual(const Trajectory& traj, const std::vector<JacobiState>& jac,
                                          std::size_t stride = 1) {
    if (jac.size() != traj.states.size()) throw InvalidArgument("jacobi_equivalence_residual: size mismatch");
    // The Jacobi solver integrates the extended system, central parts included.
    const InertiaSpec spec = traj.spec.with_center();
    const double a = traj.a;
    auto U = [&](std::size_t i) { return CentralVec(traj.states[i].u, a); };
    auto nabla_y = [&](std::size_t i) {
        return covariant_along(spec, U(i), CentralVec(jac[i].y, jac[i].b), CentralVec(jac[i].yt, jac[i].bt));
    };
    const double h = traj.dt;
    double worst = 0.0;
    for (std::size_t i = 2; i + 2 < jac.size(); i += std::max<std::size_t>(stride, 1)) {
        const CentralVec v = nabla_y(i);
        const CentralVec vt =
            (1.0 / (12.0 * h)) * (8.0 * (nabla_y(i + 1) - nabla_y(i - 1)) - (nabla_y(i + 2) - nabla_y(i - 2)));
        const CentralVec y(jac[i].y, jac[i].b);
        const CentralVec res = covariant_along(spec, U(i), v, vt) + curvature_operator(spec, y, U(i), U(i));
        worst = std::max(worst, res.max_abs());
    }
    return worst;
}

} // namespace geoflow
