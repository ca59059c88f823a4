#pragma once
// Orientation-preserving diffeomorphisms of the circle stored as x + g(x),
// and the Virasoro-Bott group built on them.

#include "geoflow/central.hpp"
#include "geoflow/grid.hpp"

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace geoflow {

/// phi(x) = x + disp(x) with disp periodic and 1 + disp' > 0 at every node.
class Diffeo {
  public:
    static Diffeo identity(const Grid& grid) { return Diffeo(Field(grid)); }

    Diffeo() : Diffeo(Field()) {}

    explicit Diffeo(Field disp) : disp_(std::move(disp)) {
        if (!disp_.all_finite()) throw DiffeoError("Diffeo: non-finite displacement", std::nan(""));
        jac_ = 1.0 + deriv(disp_, 1);
        const double m = jac_.min();
        if (!(m > 0.0))
            throw DiffeoError("Diffeo: derivative not positive (min phi' = " + std::to_string(m) + ")", m);
    }

    template <class F>
    static Diffeo from_displacement(const Grid& grid, F&& g) {
        return Diffeo(Field::sample(grid, std::forward<F>(g)));
    }

    const Grid& grid() const noexcept { return disp_.grid(); }
    const Field& disp() const noexcept { return disp_; }
    /// phi' sampled at the nodes.
    const Field& jacobian() const noexcept { return jac_; }
    double min_jacobian() const noexcept { return jac_.min(); }

    /// phi evaluated at the grid nodes.
    Field values() const {
        Field out = disp_;
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += grid().node(j);
        return out;
    }

  private:
    Field disp_;
    Field jac_;
};

/// f o phi sampled at the nodes.
inline Field pullback(const Field& f, const Diffeo& phi) { return interp_shifted(f, phi.disp()); }

/// (phi o psi)(x) = x + psi.disp(x) + phi.disp(x + psi.disp(x)).
inline Diffeo compose(const Diffeo& phi, const Diffeo& psi) {
    require_same_grid(phi.disp(), psi.disp(), "compose");
    return Diffeo(psi.disp() + pullback(phi.disp(), psi));
}

struct InvertOptions {
    int max_iter = 50;
    double tol = 1e-12;
    double margin = 1e-8;
};

/// Per-node Newton solve of y + g(y) = x starting from y0 = x - g(x).
inline Diffeo invert(const Diffeo& phi, const InvertOptions& opt = {}) {
    const Grid& grid = phi.grid();
    if (phi.min_jacobian() <= opt.margin)
        throw DiffeoError("invert: derivative too close to zero", phi.min_jacobian());
    const auto cg = spectrum(phi.disp());
    const auto cd = spectrum(deriv(phi.disp(), 1));
    Field out(grid);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double x = grid.node(j);
        double y = x - phi.disp()[j];
        bool converged = false;
        for (int it = 0; it < opt.max_iter; ++it) {
            const double r = y + eval_spectrum(grid, cg, y) - x;
            const double dr = 1.0 + eval_spectrum(grid, cd, y);
            if (!(dr > 0.0)) break;
            const double step = r / dr;
            y -= step;
            if (std::abs(step) <= opt.tol * (1.0 + std::abs(x))) {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw NumericalError("invert: Newton did not converge at node " + std::to_string(j) +
                                 " (x = " + std::to_string(x) + ")");
        out[j] = y - x;
    }
    return Diffeo(std::move(out));
}

/// S(phi) = phi'''/phi' - 3/2 (phi''/phi')^2.
inline Field schwarzian(const Diffeo& phi) {
    const Field g2 = deriv(phi.disp(), 2);
    const Field g3 = deriv(phi.disp(), 3);
    Field out(phi.grid());
    for (std::size_t j = 0; j < out.size(); ++j) {
        const double d1 = phi.jacobian()[j];
        const double r = g2[j] / d1;
        out[j] = g3[j] / d1 - 1.5 * r * r;
    }
    return out;
}

/// c(phi, psi) = 1/2 int log(phi' o psi) d log psi'.
inline double bott_cocycle(const Diffeo& phi, const Diffeo& psi) {
    require_same_grid(phi.disp(), psi.disp(), "bott_cocycle");
    const Field outer = pullback(phi.jacobian(), psi);
    const Field psi2 = deriv(psi.disp(), 2);
    Field integrand(phi.grid());
    for (std::size_t j = 0; j < integrand.size(); ++j) {
        if (!(outer[j] > 0.0)) throw DiffeoError("bott_cocycle: phi' o psi not positive", outer[j]);
        integrand[j] = std::log(outer[j]) * psi2[j] / psi.jacobian()[j];
    }
    return 0.5 * quad(integrand);
}

/// (phi, alpha) in the central extension of Diff(S^1) by R.
struct VirasoroElement {
    Diffeo phi;
    double alpha = 0.0;

    static VirasoroElement identity(const Grid& grid) { return {Diffeo::identity(grid), 0.0}; }
};

/// (phi, alpha)(psi, beta) = (phi o psi, alpha + beta + c(phi, psi)).
inline VirasoroElement vira_mul(const VirasoroElement& a, const VirasoroElement& b) {
    return {compose(a.phi, b.phi), a.alpha + b.alpha + bott_cocycle(a.phi, b.phi)};
}

/// (phi, alpha)^{-1} = (phi^{-1}, -alpha), using c(phi, phi^{-1}) = 0.
inline VirasoroElement vira_inv(const VirasoroElement& a) { return {invert(a.phi), -a.alpha}; }

/// phi_* Y = (phi' Y) o phi^{-1}.
inline Field push_forward(const Diffeo& phi, const Field& y) {
    require_same_grid(phi.disp(), y, "push_forward");
    return pullback(phi.jacobian() * y, invert(phi));
}

/// Ad(phi, alpha)(Y, b) = (phi_* Y, b + int S(phi) Y). Ad(gh) = Ad(g) Ad(h).
inline CentralVec vira_adjoint(const VirasoroElement& g, const CentralVec& v) {
    require_same_grid(g.phi.disp(), v.x, "vira_adjoint");
    return {push_forward(g.phi, v.x), v.a + quad(schwarzian(g.phi) * v.x)};
}

/// p-th derivative of f o g at a point. f_derivs[j] = f^(j)(g(x)), g_derivs[j] = g^(j)(x),
/// both indexed by derivative order and holding at least p+1 entries.
inline double faa_di_bruno(std::span<const double> f_derivs, std::span<const double> g_derivs, int p) {
    if (p < 0) throw InvalidArgument("faa_di_bruno: order must be non-negative");
    if (p > 20) throw InvalidArgument("faa_di_bruno: order above 20 is not supported");
    const auto need = static_cast<std::size_t>(p) + 1;
    if (f_derivs.size() < need || g_derivs.size() < need)
        throw InvalidArgument("faa_di_bruno: need derivatives up to order " + std::to_string(p));
    if (p == 0) return f_derivs[0];

    std::vector<double> fact(p + 1, 1.0);
    for (int i = 1; i <= p; ++i) fact[i] = fact[i - 1] * i;

    // Sum over ordered compositions alpha_1 + ... + alpha_j = p of
    // p! / (j! prod alpha_i!) f^(j) prod g^(alpha_i).
    double total = 0.0;
    std::vector<int> parts;
    auto recurse = [&](auto&& self, int remaining, double weight, double gprod) -> void {
        if (remaining == 0) {
            const auto j = parts.size();
            total += fact[p] / fact[j] * weight * f_derivs[j] * gprod;
            return;
        }
        for (int a = 1; a <= remaining; ++a) {
            parts.push_back(a);
            self(self, remaining - a, weight / fact[a], gprod * g_derivs[a]);
            parts.pop_back();
        }
    };
    recurse(recurse, p, 1.0, 1.0);
    return total;
}

} // namespace geoflow
