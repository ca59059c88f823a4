#pragma once

#include "geoflow/grid.hpp"

namespace geoflow {

/// Element (X, a) of the centrally extended algebra. Plain vector fields carry a = 0.
struct CentralVec {
    Field x;
    double a = 0.0;

    CentralVec() = default;
    CentralVec(Field field, double central = 0.0) : x(std::move(field)), a(central) {}

    const Grid& grid() const noexcept { return x.grid(); }

    CentralVec& operator+=(const CentralVec& o) { x += o.x; a += o.a; return *this; }
    CentralVec& operator-=(const CentralVec& o) { x -= o.x; a -= o.a; return *this; }
    CentralVec& operator*=(double s) { x *= s; a *= s; return *this; }

    friend CentralVec operator+(CentralVec l, const CentralVec& r) { return l += r; }
    friend CentralVec operator-(CentralVec l, const CentralVec& r) { return l -= r; }
    friend CentralVec operator*(CentralVec v, double s) { return v *= s; }
    friend CentralVec operator*(double s, CentralVec v) { return v *= s; }
    friend CentralVec operator-(CentralVec v) { return v *= -1.0; }

    /// max(sup |x|, |a|)
    double max_abs() const noexcept { return std::max(x.max_abs(), std::abs(a)); }
};

inline CentralVec zero_like(const CentralVec& v) { return CentralVec(Field(v.grid()), 0.0); }

} // namespace geoflow
