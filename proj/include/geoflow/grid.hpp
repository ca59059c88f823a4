#pragma once
// Periodic spectral kernel: uniform grids on a circle of given circumference,
// FFT-based differentiation, trapezoidal quadrature, trigonometric
// interpolation and Fourier multipliers.

#include "geoflow/error.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace geoflow {

using Complex = std::complex<double>;

/// Uniform periodic grid x_j = origin + j * length / n, j = 0..n-1.
class Grid {
  public:
    explicit Grid(std::size_t n = 256, double length = 2.0 * std::numbers::pi, double origin = 0.0)
        : n_(n), length_(length), origin_(origin) {
        if (n_ < 8 || n_ % 2 != 0)
            throw InvalidArgument("Grid: sample count must be even and >= 8, got " + std::to_string(n_));
        if (!(length_ > 0.0) || !std::isfinite(length_))
            throw InvalidArgument("Grid: length must be positive and finite");
        if (!std::isfinite(origin_))
            throw InvalidArgument("Grid: origin must be finite");
    }

    std::size_t size() const noexcept { return n_; }
    double length() const noexcept { return length_; }
    double origin() const noexcept { return origin_; }
    double spacing() const noexcept { return length_ / static_cast<double>(n_); }
    double node(std::size_t j) const noexcept { return origin_ + spacing() * static_cast<double>(j); }

    std::vector<double> nodes() const {
        std::vector<double> x(n_);
        for (std::size_t j = 0; j < n_; ++j) x[j] = node(j);
        return x;
    }

    /// Number of stored half-spectrum coefficients (m = 0..n/2).
    std::size_t modes() const noexcept { return n_ / 2 + 1; }
    std::size_t nyquist() const noexcept { return n_ / 2; }

    /// Angular wavenumber of Fourier mode m.
    double wavenumber(std::size_t m) const noexcept {
        return 2.0 * std::numbers::pi * static_cast<double>(m) / length_;
    }

    friend bool operator==(const Grid&, const Grid&) = default;

  private:
    std::size_t n_;
    double length_;
    double origin_;
};

namespace detail {

struct FftPlan {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
    FftPlan() = default;
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;
    ~FftPlan() {
        if (forward) fftw_destroy_plan(forward);
        if (backward) fftw_destroy_plan(backward);
    }
};

// The FFTW planner is not thread-safe; execution with the new-array interface is.
inline const FftPlan& fft_plan(std::size_t n) {
    static std::mutex mutex;
    static std::map<std::size_t, std::unique_ptr<FftPlan>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) {
        slot = std::make_unique<FftPlan>();
        std::vector<double> real(n);
        std::vector<Complex> spec(n / 2 + 1);
        auto* c = reinterpret_cast<fftw_complex*>(spec.data());
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        slot->forward = fftw_plan_dft_r2c_1d(static_cast<int>(n), real.data(), c, flags);
        slot->backward = fftw_plan_dft_c2r_1d(static_cast<int>(n), c, real.data(), flags);
        if (!slot->forward || !slot->backward) throw NumericalError("FFTW planning failed");
    }
    return *slot;
}

} // namespace detail

/// Real samples on a Grid.
class Field {
  public:
    Field() : grid_(8), values_(8, 0.0) {}
    explicit Field(const Grid& grid, double fill = 0.0) : grid_(grid), values_(grid.size(), fill) {}
    Field(const Grid& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
        if (values_.size() != grid_.size())
            throw InvalidArgument("Field: value count does not match grid size");
    }

    template <class F>
    static Field sample(const Grid& grid, F&& f) {
        Field out(grid);
        for (std::size_t j = 0; j < grid.size(); ++j) out.values_[j] = f(grid.node(j));
        return out;
    }

    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }
    const std::vector<double>& vec() const noexcept { return values_; }
    double operator[](std::size_t j) const noexcept { return values_[j]; }
    double& operator[](std::size_t j) noexcept { return values_[j]; }

    bool all_finite() const noexcept {
        return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
    }
    double max_abs() const noexcept {
        double m = 0.0;
        for (double v : values_) m = std::max(m, std::abs(v));
        return m;
    }
    double min() const noexcept { return *std::min_element(values_.begin(), values_.end()); }
    double max() const noexcept { return *std::max_element(values_.begin(), values_.end()); }

    template <class F>
    Field map(F&& f) const {
        Field out(grid_);
        for (std::size_t j = 0; j < size(); ++j) out.values_[j] = f(values_[j]);
        return out;
    }

    Field& operator+=(const Field& o) { return combine(o, [](double& a, double b) { a += b; }); }
    Field& operator-=(const Field& o) { return combine(o, [](double& a, double b) { a -= b; }); }
    Field& operator*=(const Field& o) { return combine(o, [](double& a, double b) { a *= b; }); }
    Field& operator/=(const Field& o) { return combine(o, [](double& a, double b) { a /= b; }); }
    Field& operator+=(double s) { for (double& v : values_) v += s; return *this; }
    Field& operator-=(double s) { for (double& v : values_) v -= s; return *this; }
    Field& operator*=(double s) { for (double& v : values_) v *= s; return *this; }

    friend Field operator+(Field a, const Field& b) { return a += b; }
    friend Field operator-(Field a, const Field& b) { return a -= b; }
    friend Field operator*(Field a, const Field& b) { return a *= b; }
    friend Field operator/(Field a, const Field& b) { return a /= b; }
    friend Field operator+(Field a, double s) { return a += s; }
    friend Field operator+(double s, Field a) { return a += s; }
    friend Field operator-(Field a, double s) { return a -= s; }
    friend Field operator-(double s, Field a) {
        for (double& v : a.values_) v = s - v;
        return a;
    }
    friend Field operator*(Field a, double s) { return a *= s; }
    friend Field operator*(double s, Field a) { return a *= s; }
    friend Field operator-(Field a) { return a *= -1.0; }

  private:
    template <class Op>
    Field& combine(const Field& o, Op op) {
        if (!(grid_ == o.grid_)) throw InvalidArgument("Field: operands live on different grids");
        for (std::size_t j = 0; j < size(); ++j) op(values_[j], o.values_[j]);
        return *this;
    }

    Grid grid_;
    std::vector<double> values_;
};

inline void require_same_grid(const Field& a, const Field& b, const char* where) {
    if (!(a.grid() == b.grid())) throw InvalidArgument(std::string(where) + ": fields live on different grids");
}

/// Fourier-series coefficients c_m, m = 0..n/2, with f(x) = sum_m c_m exp(i k_m (x - origin)).
inline std::vector<Complex> spectrum(const Field& f) {
    const std::size_t n = f.size();
    const auto& plan = detail::fft_plan(n);
    std::vector<double> in(f.vec());
    std::vector<Complex> out(n / 2 + 1);
    fftw_execute_dft_r2c(plan.forward, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& c : out) c *= scale;
    return out;
}

inline Field from_spectrum(const Grid& grid, std::vector<Complex> coeffs) {
    const std::size_t n = grid.size();
    if (coeffs.size() != n / 2 + 1) throw InvalidArgument("from_spectrum: wrong coefficient count");
    // c2r ignores the imaginary parts of the mean and Nyquist terms.
    coeffs.front().imag(0.0);
    coeffs.back().imag(0.0);
    const auto& plan = detail::fft_plan(n);
    std::vector<double> out(n);
    fftw_execute_dft_c2r(plan.backward, reinterpret_cast<fftw_complex*>(coeffs.data()), out.data());
    return Field(grid, std::move(out));
}

/// Multiply the half spectrum by symbol(k_m). The symbol must be Hermitian
/// (symbol(-k) = conj(symbol(k))); only the real part is used at the Nyquist mode.
template <class Symbol>
Field apply_spectral(const Field& f, Symbol&& symbol) {
    auto c = spectrum(f);
    const Grid& g = f.grid();
    for (std::size_t m = 0; m < c.size(); ++m) {
        const Complex s = symbol(g.wavenumber(m));
        c[m] *= (m == g.nyquist()) ? Complex(s.real(), 0.0) : s;
    }
    return from_spectrum(g, std::move(c));
}

/// Spectral derivative of the given order; the Nyquist mode is dropped for odd orders.
inline Field deriv(const Field& f, int order = 1) {
    if (order < 1) throw InvalidArgument("deriv: order must be >= 1");
    if (!f.all_finite()) throw NumericalError("deriv: non-finite input values");
    auto c = spectrum(f);
    const Grid& g = f.grid();
    for (std::size_t m = 0; m < c.size(); ++m) {
        if (m == g.nyquist() && order % 2 == 1) {
            c[m] = 0.0;
            continue;
        }
        const Complex ik(0.0, g.wavenumber(m));
        c[m] *= std::pow(ik, order);
    }
    return from_spectrum(g, std::move(c));
}

/// Trapezoidal rule over one period.
inline double quad(const Field& f) {
    double s = 0.0;
    for (double v : f.values()) s += v;
    return s * f.grid().spacing();
}

/// Evaluate the trigonometric interpolant from precomputed coefficients.
inline double eval_spectrum(const Grid& grid, std::span<const Complex> c, double x) {
    const double theta = grid.wavenumber(1) * (x - grid.origin());
    const std::size_t nyq = grid.nyquist();
    const Complex step(std::cos(theta), std::sin(theta));
    Complex e(1.0, 0.0);
    double acc = 0.0;
    for (std::size_t m = 1; m < nyq; ++m) {
        if (m % 32 == 0) {
            const double a = theta * static_cast<double>(m);
            e = Complex(std::cos(a), std::sin(a));
        } else {
            e *= step;
        }
        acc += c[m].real() * e.real() - c[m].imag() * e.imag();
    }
    return c[0].real() + 2.0 * acc + c[nyq].real() * std::cos(theta * static_cast<double>(nyq));
}

/// Trigonometric (Fourier-series) interpolation of f at arbitrary points.
inline std::vector<double> interp(const Field& f, std::span<const double> points) {
    const auto c = spectrum(f);
    std::vector<double> out(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) out[i] = eval_spectrum(f.grid(), c, points[i]);
    return out;
}

inline double interp(const Field& f, double point) {
    const auto c = spectrum(f);
    return eval_spectrum(f.grid(), c, point);
}

/// f evaluated at x_j + shift_j; the grid-valued composition f(id + shift).
inline Field interp_shifted(const Field& f, const Field& shift) {
    require_same_grid(f, shift, "interp_shifted");
    const auto c = spectrum(f);
    Field out(f.grid());
    for (std::size_t j = 0; j < f.size(); ++j) out[j] = eval_spectrum(f.grid(), c, f.grid().node(j) + shift[j]);
    return out;
}

/// Real, even Fourier multiplier addressed by angular wavenumber.
struct Multiplier {
    std::function<double(double)> symbol;
    std::string name = "multiplier";
};

inline Field apply_multiplier(const Field& f, const Multiplier& m) {
    return apply_spectral(f, [&](double k) { return Complex(m.symbol(k), 0.0); });
}

inline Field apply_inverse_multiplier(const Field& f, const Multiplier& m) {
    const Grid& g = f.grid();
    for (std::size_t j = 0; j < g.modes(); ++j)
        if (m.symbol(g.wavenumber(j)) == 0.0)
            throw InvalidArgument("apply_inverse_multiplier: " + m.name + " vanishes at mode " + std::to_string(j));
    return apply_spectral(f, [&](double k) { return Complex(1.0 / m.symbol(k), 0.0); });
}

/// Zero all modes m > fraction * n/2.
inline Field dealias(const Field& f, double fraction = 2.0 / 3.0) {
    if (!(fraction > 0.0 && fraction <= 1.0)) throw InvalidArgument("dealias: fraction must lie in (0,1]");
    if (fraction == 1.0) return f;
    auto c = spectrum(f);
    const double cutoff = fraction * static_cast<double>(f.grid().nyquist());
    for (std::size_t m = 0; m < c.size(); ++m)
        if (static_cast<double>(m) > cutoff) c[m] = 0.0;
    return from_spectrum(f.grid(), std::move(c));
}

/// Dealiased pointwise product.
inline Field product(const Field& a, const Field& b, double fraction = 2.0 / 3.0) {
    return dealias(a * b, fraction);
}

/// Largest coefficient magnitude among the top third of the spectrum relative to the largest overall.
inline double spectral_tail(const Field& f) {
    const auto c = spectrum(f);
    double top = 0.0, all = 0.0;
    const std::size_t start = 2 * c.size() / 3;
    for (std::size_t m = 0; m < c.size(); ++m) {
        all = std::max(all, std::abs(c[m]));
        if (m >= start) top = std::max(top, std::abs(c[m]));
    }
    return all > 0.0 ? top / all : 0.0;
}

} // namespace geoflow
