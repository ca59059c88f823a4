#pragma once
// Right-invariant metrics on Diff(S^1) and its central extension: inertia
// operators, the Lie bracket, the Gelfand-Fuchs cocycle, ad-transpose and alpha.
//
// Bracket convention: [X, Y] = X'Y - XY' (right-invariant fields), so that
// ad(X)^T Z = A^{-1}(2X' A Z + X (A Z)' + c X''').

#include "geoflow/central.hpp"
#include "geoflow/grid.hpp"

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace geoflow {

enum class Family { Hk, GA };

/// Inertia operator A = sum_i c_i (-1)^i d^{2i}, symbol sum_i c_i xi^{2i}, on either
/// the vector-field algebra of S^1 or its central extension by the Gelfand-Fuchs cocycle.
class InertiaSpec {
  public:
    static InertiaSpec hk(int k) {
        if (k < 0) throw InvalidArgument("InertiaSpec: H^k needs k >= 0");
        InertiaSpec s;
        s.family_ = Family::Hk;
        s.k_ = k;
        s.coeffs_.assign(static_cast<std::size_t>(k) + 1, 1.0);
        return s;
    }
    static InertiaSpec ga(double A) {
        if (!(A >= 0.0) || !std::isfinite(A)) throw InvalidArgument("InertiaSpec: G^A needs finite A >= 0");
        InertiaSpec s;
        s.family_ = Family::GA;
        s.A_ = A;
        s.coeffs_ = {1.0, A};
        return s;
    }
    /// Same inertia operator on the centrally extended (Virasoro) algebra.
    InertiaSpec with_center(bool on = true) const {
        InertiaSpec s = *this;
        s.extended_ = on;
        return s;
    }

    /// Accepts "h0", "h1", ..., "ga" (A = 1) or "ga:<A>", optionally followed by "+center".
    static InertiaSpec parse(const std::string& text) {
        const std::string suffix = "+center";
        if (text.size() > suffix.size() && text.compare(text.size() - suffix.size(), suffix.size(), suffix) == 0)
            return parse(text.substr(0, text.size() - suffix.size())).with_center();
        if (text.size() >= 2 && (text[0] == 'h' || text[0] == 'H')) {
            std::size_t used = 0;
            const int k = std::stoi(text.substr(1), &used);
            if (used + 1 != text.size()) throw InvalidArgument("InertiaSpec: bad family '" + text + "'");
            return hk(k);
        }
        if (text == "ga" || text == "GA") return ga(1.0);
        if (text.rfind("ga:", 0) == 0 || text.rfind("GA:", 0) == 0) return ga(std::stod(text.substr(3)));
        throw InvalidArgument("InertiaSpec: unknown family '" + text + "'");
    }

    Family family() const noexcept { return family_; }
    int k() const noexcept { return k_; }
    double A() const noexcept { return A_; }
    const std::vector<double>& coeffs() const noexcept { return coeffs_; }
    int order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    bool extended() const noexcept { return extended_; }

    double symbol(double xi) const noexcept {
        const double x2 = xi * xi;
        double s = 0.0, p = 1.0;
        for (double c : coeffs_) {
            s += c * p;
            p *= x2;
        }
        return s;
    }

    Multiplier multiplier() const {
        return {[c = coeffs_](double xi) {
                    const double x2 = xi * xi;
                    double s = 0.0, p = 1.0;
                    for (double ci : c) {
                        s += ci * p;
                        p *= x2;
                    }
                    return s;
                },
                name()};
    }

    std::string name() const {
        const std::string tail = extended_ ? "+center" : "";
        if (family_ == Family::Hk) return "h" + std::to_string(k_) + tail;
        char buf[64];
        std::snprintf(buf, sizeof buf, "ga:%.17g", A_);
        return buf + tail;
    }

    /// Defaults to the H^0 (L^2) metric.
    InertiaSpec() = default;

  private:
    Family family_ = Family::Hk;
    int k_ = 0;
    double A_ = 0.0;
    std::vector<double> coeffs_{1.0};
    bool extended_ = false;
};

inline Field apply_inertia(const InertiaSpec& spec, const Field& f) {
    if (spec.order() == 0) return f;
    return apply_multiplier(f, spec.multiplier());
}

inline Field apply_inertia_inverse(const InertiaSpec& spec, const Field& f) {
    if (spec.order() == 0) return f;
    return apply_inverse_multiplier(f, spec.multiplier());
}

/// <(X,a),(Y,b)> = int X A(Y) + a b.
inline double inner(const InertiaSpec& spec, const CentralVec& v, const CentralVec& w) {
    require_same_grid(v.x, w.x, "inner");
    return quad(v.x * apply_inertia(spec, w.x)) + v.a * w.a;
}

inline double norm2(const InertiaSpec& spec, const CentralVec& v) { return inner(spec, v, v); }

/// omega(X, Y) = int X' Y''.
inline double gelfand_fuchs(const Field& x, const Field& y) {
    require_same_grid(x, y, "gelfand_fuchs");
    return quad(deriv(x, 1) * deriv(y, 2));
}

/// Vector-field part of the bracket, X'Y - XY'.
inline Field field_bracket(const Field& x, const Field& y) {
    require_same_grid(x, y, "bracket");
    return dealias(deriv(x, 1) * y - x * deriv(y, 1));
}

inline CentralVec bracket(const CentralVec& v, const CentralVec& w) {
    return {field_bracket(v.x, w.x), gelfand_fuchs(v.x, w.x)};
}

/// ad(v) w = [v, w].
inline CentralVec ad(const CentralVec& v, const CentralVec& w) { return bracket(v, w); }

/// Bracket of the algebra selected by spec: the central part is dropped without the extension.
inline CentralVec ad(const InertiaSpec& spec, const CentralVec& v, const CentralVec& w) {
    if (spec.extended()) return bracket(v, w);
    return {field_bracket(v.x, w.x), 0.0};
}

/// Field part of ad(X,a)^T (Z,c) before applying A^{-1}: 2X' AZ + X (AZ)' + c X'''.
inline Field ad_transpose_momentum(const InertiaSpec& spec, const Field& x, const Field& z, double c) {
    require_same_grid(x, z, "ad_transpose");
    const Field az = apply_inertia(spec, z);
    Field m = dealias(2.0 * deriv(x, 1) * az + x * deriv(az, 1));
    if (c != 0.0) m += c * deriv(x, 3);
    return m;
}

/// ad(v)^T w; the central part is always zero, and w.a only enters on the extended algebra.
inline CentralVec ad_transpose(const InertiaSpec& spec, const CentralVec& v, const CentralVec& w) {
    const double c = spec.extended() ? w.a : 0.0;
    return {apply_inertia_inverse(spec, ad_transpose_momentum(spec, v.x, w.x, c)), 0.0};
}

/// alpha(v) w = ad(w)^T v.
inline CentralVec alpha_op(const InertiaSpec& spec, const CentralVec& v, const CentralVec& w) {
    return ad_transpose(spec, w, v);
}

/// Levi-Civita derivative of the constant field Y along the constant field X:
/// 1/2 ad(X)^T Y + 1/2 ad(Y)^T X - 1/2 ad(X) Y.
inline CentralVec covariant_constant(const InertiaSpec& spec, const CentralVec& x, const CentralVec& y) {
    return 0.5 * (ad_transpose(spec, x, y) + ad_transpose(spec, y, x) - ad(spec, x, y));
}

} // namespace geoflow
