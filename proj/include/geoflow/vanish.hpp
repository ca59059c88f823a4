#pragma once
// Compression-wave paths on the real line whose L^2 energy is O(eps), and the
// resulting collapse of path length toward a fixed compactly supported target.
//
// Maps are sampled on a finite window outside of which they are either the
// identity or a translation; LineMap stores phi and phi_x on that window.

#include "geoflow/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <future>
#include <numbers>
#include <string>
#include <vector>

namespace geoflow {

/// f = clamp(z, 0, 1) convolved with the normalised bump G_eps(s) ~ exp(-1/(1-(s/eps)^2)).
/// Phi is the CDF of G_eps and Psi its antiderivative, both tabulated on [-eps, eps] with
/// cubic Hermite interpolation; f = Psi(z) - Psi(z-1), f' = Phi(z) - Phi(z-1).
class MollifiedRamp {
  public:
    explicit MollifiedRamp(double eps, int samples = 256) : eps_(eps), samples_(samples) {
        if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidArgument("MollifiedRamp: eps must be positive");
        if (samples < 16) throw InvalidArgument("MollifiedRamp: need at least 16 samples across eps");
        build();
    }

    double eps() const noexcept { return eps_; }
    int samples() const noexcept { return samples_; }

    /// Normalised kernel G_eps.
    double kernel(double s) const noexcept {
        const double r = s / eps_;
        if (std::abs(r) >= 1.0) return 0.0;
        return std::exp(-1.0 / (1.0 - r * r)) / norm_;
    }
    double Phi(double z) const noexcept {
        if (z <= -eps_) return 0.0;
        if (z >= eps_) return 1.0;
        return std::clamp(hermite(phi_, dens_, z), 0.0, 1.0);
    }
    double Psi(double z) const noexcept {
        if (z <= -eps_) return 0.0;
        if (z >= eps_) return z;
        return hermite(psi_, phi_, z);
    }

    double f(double z) const noexcept { return Psi(z) - Psi(z - 1.0); }
    double df(double z) const noexcept { return Phi(z) - Phi(z - 1.0); }
    double d2f(double z) const noexcept { return kernel(z) - kernel(z - 1.0); }

    /// F(z, a) = clamp(z, 0, a) convolved in z with G_eps, for a >= 0.
    double F(double z, double a) const noexcept { return Psi(z) - Psi(z - a); }
    double Fz(double z, double a) const noexcept { return Phi(z) - Phi(z - a); }
    double Fa(double z, double a) const noexcept { return Phi(z - a); }

  private:
    static constexpr double kGaussX[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                          0.9061798459386640};
    static constexpr double kGaussW[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                          0.4786286704993665, 0.2369268850561891};

    double raw(double s) const noexcept {
        const double r = s / eps_;
        if (std::abs(r) >= 1.0) return 0.0;
        return std::exp(-1.0 / (1.0 - r * r));
    }

    void build() {
        const int m = 2 * samples_;
        h_ = eps_ / samples_;
        std::vector<double> cell(m, 0.0);
        for (int i = 0; i < m; ++i) {
            const double lo = -eps_ + i * h_;
            double acc = 0.0;
            for (int q = 0; q < 5; ++q) acc += kGaussW[q] * raw(lo + 0.5 * h_ * (1.0 + kGaussX[q]));
            cell[i] = 0.5 * h_ * acc;
        }
        // Symmetrise so that Phi(-s) = 1 - Phi(s) holds to rounding.
        for (int i = 0; i < samples_; ++i) {
            const double avg = 0.5 * (cell[i] + cell[m - 1 - i]);
            cell[i] = cell[m - 1 - i] = avg;
        }
        norm_ = 0.0;
        for (double c : cell) norm_ += c;
        phi_.assign(m + 1, 0.0);
        dens_.assign(m + 1, 0.0);
        psi_.assign(m + 1, 0.0);
        for (int i = 0; i < m; ++i) phi_[i + 1] = phi_[i] + cell[i] / norm_;
        phi_[m] = 1.0;
        for (int i = 0; i <= m; ++i) dens_[i] = raw(-eps_ + i * h_) / norm_;
        for (int i = 0; i < m; ++i)
            psi_[i + 1] = psi_[i] + 0.5 * h_ * (phi_[i] + phi_[i + 1]) + h_ * h_ / 12.0 * (dens_[i] - dens_[i + 1]);
    }

    double hermite(const std::vector<double>& v, const std::vector<double>& dv, double z) const noexcept {
        const double s = (z + eps_) / h_;
        const int m = static_cast<int>(v.size()) - 1;
        const int i = std::clamp(static_cast<int>(s), 0, m - 1);
        const double u = s - i;
        const double u2 = u * u, u3 = u2 * u;
        return (2 * u3 - 3 * u2 + 1) * v[i] + (u3 - 2 * u2 + u) * h_ * dv[i] + (-2 * u3 + 3 * u2) * v[i + 1] +
               (u3 - u2) * h_ * dv[i + 1];
    }

    double eps_;
    int samples_;
    double h_ = 0.0;
    double norm_ = 1.0;
    std::vector<double> phi_, dens_, psi_;
};

inline MollifiedRamp mollified_ramp(double eps, int samples = 256) { return MollifiedRamp(eps, samples); }

/// phi and phi_x of one map sampled on a uniform window. A periodic window omits the
/// right endpoint; otherwise the integrand is assumed to vanish outside.
struct LineMap {
    double t = 0.0;
    double x0 = 0.0;
    double dx = 1.0;
    bool periodic = false;
    std::vector<double> phi;
    std::vector<double> phi_x;

    std::size_t size() const noexcept { return phi.size(); }
    double node(std::size_t j) const noexcept { return x0 + dx * static_cast<double>(j); }
    double min_jacobian() const noexcept { return *std::min_element(phi_x.begin(), phi_x.end()); }
    /// sup |phi(x) - x - target(x)|
    template <class G>
    double displacement_error(G&& target) const {
        double e = 0.0;
        for (std::size_t j = 0; j < size(); ++j) e = std::max(e, std::abs(phi[j] - node(j) - target(node(j))));
        return e;
    }
};

/// Quadrature weight of node j on the window.
inline double quad_weight(const LineMap& m, std::size_t j) {
    if (m.periodic) return m.dx;
    return (j == 0 || j + 1 == m.size()) ? 0.5 * m.dx : m.dx;
}

struct WaveSpec {
    double eps = 0.1;
    double lam = 0.9;
    /// Window half-length.
    double box = 4.0;
    /// Spatial cells across one eps-wide transition.
    int cells_per_eps = 32;
    /// Kernel table resolution across eps.
    int kernel_samples = 256;

    static WaveSpec with_eps(double eps) {
        WaveSpec s;
        s.eps = eps;
        s.lam = 1.0 - eps;
        return s;
    }

    void validate() const {
        if (!(eps > 0.0 && eps <= 0.3)) throw InvalidArgument("WaveSpec: eps must lie in (0, 0.3]");
        // max f' = 1 for the mollified ramp.
        if (!(lam > 0.0 && lam < 1.0)) throw InvalidArgument("WaveSpec: need 0 < lam < 1/max f' = 1");
        if (!(box > 0.0)) throw InvalidArgument("WaveSpec: box must be positive");
        if (cells_per_eps < 4) throw InvalidArgument("WaveSpec: cells_per_eps must be >= 4");
    }
};

/// phi(t, x) = x + f(t - lam x).
class CompressionWave {
  public:
    explicit CompressionWave(const WaveSpec& spec) : spec_((spec.validate(), spec)), ramp_(spec.eps, spec.kernel_samples) {}

    const WaveSpec& spec() const noexcept { return spec_; }
    const MollifiedRamp& ramp() const noexcept { return ramp_; }

    /// Window [x0, x1] on which the wave is active for t in [t0, t1], with eps padding.
    std::pair<double, double> active_window(double t0, double t1) const {
        const double pad = spec_.eps;
        return {(t0 - 1.0 - spec_.eps) / spec_.lam - pad, (t1 + spec_.eps) / spec_.lam + pad};
    }

    LineMap at(double t) const { return at(t, -spec_.box, spec_.box); }

    LineMap at(double t, double x_lo, double x_hi) const {
        if (!(x_hi > x_lo)) throw InvalidArgument("CompressionWave: empty window");
        LineMap m;
        m.t = t;
        m.x0 = x_lo;
        const double target_dx = spec_.eps * spec_.lam / spec_.cells_per_eps;
        const auto n = static_cast<std::size_t>(std::ceil((x_hi - x_lo) / target_dx)) + 1;
        m.dx = (x_hi - x_lo) / static_cast<double>(n - 1);
        m.phi.resize(n);
        m.phi_x.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double x = m.node(j);
            const double z = t - spec_.lam * x;
            m.phi[j] = x + ramp_.f(z);
            m.phi_x[j] = 1.0 - spec_.lam * ramp_.df(z);
        }
        const double mj = m.min_jacobian();
        if (!(mj > 0.0)) throw DiffeoError("CompressionWave: map not monotone", mj);
        return m;
    }

    /// (t1 - t0) 3 eps / (1 - eps).
    double energy_bound(double t0, double t1) const { return (t1 - t0) * 3.0 * spec_.eps / (1.0 - spec_.eps); }

  private:
    WaveSpec spec_;
    MollifiedRamp ramp_;
};

inline LineMap basic_wave(const WaveSpec& spec, double t) { return CompressionWave(spec).at(t); }

/// Target displacement g >= 0 with compact support [lo, hi], single peak and g' > -1.
struct Displacement {
    std::function<double(double)> g;
    std::function<double(double)> dg;
    double lo = 0.0;
    double hi = 0.0;
    double peak = 0.0;
    std::string name = "custom";

    /// amplitude * exp(1 - 1/(1 - r^2)), r = (x - center)/halfwidth; the peak equals amplitude.
    static Displacement bump(double amplitude, double center = 0.0, double halfwidth = 1.0) {
        if (!(amplitude >= 0.0) || !(halfwidth > 0.0)) throw InvalidArgument("Displacement: bad bump parameters");
        Displacement d;
        d.g = [=](double x) {
            const double r = (x - center) / halfwidth;
            return std::abs(r) < 1.0 ? amplitude * std::exp(1.0 - 1.0 / (1.0 - r * r)) : 0.0;
        };
        d.dg = [=](double x) {
            const double r = (x - center) / halfwidth;
            if (std::abs(r) >= 1.0) return 0.0;
            const double q = 1.0 - r * r;
            return amplitude * std::exp(1.0 - 1.0 / q) * (-2.0 * r / (q * q)) / halfwidth;
        };
        d.lo = center - halfwidth;
        d.hi = center + halfwidth;
        d.peak = center;
        d.name = "bump";
        return d;
    }

    static Displacement zero() {
        Displacement d;
        d.g = [](double) { return 0.0; };
        d.dg = [](double) { return 0.0; };
        d.lo = -1.0;
        d.hi = 1.0;
        d.name = "zero";
        return d;
    }
};

/// Starting wave x + F(t - lam x, g(x)) left of the peak, stopping wave
/// x + F(t - lam x - (1 - lam)(b - g(x)), g(x)) right of it, b = max g.
class StartStopWave {
  public:
    StartStopWave(double eps, Displacement target, int cells_per_eps = 32, int kernel_samples = 256)
        : eps_(eps), lam_(1.0 - eps), target_(std::move(target)), ramp_(eps, kernel_samples),
          cells_per_eps_(cells_per_eps) {
        if (!(eps > 0.0 && eps <= 0.3)) throw InvalidArgument("StartStopWave: eps must lie in (0, 0.3]");
        if (!(target_.hi > target_.lo)) throw InvalidArgument("StartStopWave: empty target support");
        b_ = target_.g(target_.peak);
        const int probe = 4096;
        for (int i = 0; i <= probe; ++i) {
            const double x = target_.lo + (target_.hi - target_.lo) * i / probe;
            const double gv = target_.g(x), dg = target_.dg(x);
            if (gv < 0.0) throw InvalidArgument("StartStopWave: target displacement must be >= 0");
            if (!(dg > -1.0)) throw InvalidArgument("StartStopWave: target derivative must exceed -1");
            if ((x < target_.peak && dg < -1e-12) || (x > target_.peak && dg > 1e-12))
                throw InvalidArgument("StartStopWave: target must increase up to its peak and decrease after");
            b_ = std::max(b_, gv);
        }
    }

    double eps() const noexcept { return eps_; }
    double lam() const noexcept { return lam_; }
    const Displacement& target() const noexcept { return target_; }

    /// Before t_begin every map is the identity; from t_end on it is x + g(x).
    double t_begin() const noexcept { return lam_ * target_.lo - eps_; }
    double t_end() const noexcept { return lam_ * target_.hi + (1.0 - lam_) * b_ + b_ + eps_; }

    LineMap at(double t) const {
        LineMap m;
        m.t = t;
        m.x0 = target_.lo;
        const double target_dx = eps_ * lam_ / cells_per_eps_;
        const auto n = static_cast<std::size_t>(std::ceil((target_.hi - target_.lo) / target_dx)) + 1;
        m.dx = (target_.hi - target_.lo) / static_cast<double>(n - 1);
        m.phi.resize(n);
        m.phi_x.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double x = m.node(j);
            const double a = target_.g(x), da = target_.dg(x);
            double z = t - lam_ * x, zx = -lam_;
            if (x > target_.peak) {
                z -= (1.0 - lam_) * (b_ - a);
                zx += (1.0 - lam_) * da;
            }
            m.phi[j] = x + ramp_.F(z, a);
            m.phi_x[j] = 1.0 + ramp_.Fz(z, a) * zx + ramp_.Fa(z, a) * da;
        }
        const double mj = m.min_jacobian();
        if (!(mj > 0.0)) throw DiffeoError("StartStopWave: map not monotone", mj);
        return m;
    }

  private:
    double eps_;
    double lam_;
    Displacement target_;
    MollifiedRamp ramp_;
    int cells_per_eps_;
    double b_ = 0.0;
};

inline LineMap start_stop_wave(const StartStopWave& wave, double t) { return wave.at(t); }

/// Maps sampled at increasing times on one common window.
struct PathSample {
    std::vector<double> times;
    std::vector<LineMap> maps;
};

struct PathMetrics {
    double energy = 0.0;
    double length = 0.0;
    double duration = 0.0;
    double min_jacobian = 0.0;
    std::size_t samples = 0;
};

/// Energy int int phi_t^2 phi_x dx dt and length int sqrt(int phi_t^2 phi_x dx) dt of a path
/// given by map_at(i), i = 0..times.size()-1. phi_t uses second-order differences in time
/// (centred inside, one-sided at the ends); outer integrals use the trapezoid rule.
template <class MapAt>
PathMetrics measure_path(MapAt&& map_at, const std::vector<double>& times) {
    const std::size_t nt = times.size();
    if (nt < 3) throw InvalidArgument("measure_path: need at least three time samples");
    for (std::size_t i = 1; i < nt; ++i)
        if (!(times[i] > times[i - 1])) throw InvalidArgument("measure_path: times must increase");
    const double h = (times.back() - times.front()) / static_cast<double>(nt - 1);
    for (std::size_t i = 1; i < nt; ++i)
        if (std::abs(times[i] - times[i - 1] - h) > 1e-9 * std::max(1.0, h))
            throw InvalidArgument("measure_path: times must be uniformly spaced");

    PathMetrics out;
    out.duration = times.back() - times.front();
    out.samples = nt;
    out.min_jacobian = std::numeric_limits<double>::infinity();

    std::vector<LineMap> win;
    auto fetch = [&](std::size_t i) {
        LineMap m = map_at(i);
        const double mj = m.min_jacobian();
        if (!(mj > 0.0)) throw DiffeoError("measure_path: non-monotone map in path", mj);
        out.min_jacobian = std::min(out.min_jacobian, mj);
        if (!win.empty() && (win.front().size() != m.size() || win.front().x0 != m.x0))
            throw InvalidArgument("measure_path: maps use different windows");
        return m;
    };
    auto density = [&](const LineMap& m, auto&& phit) {
        double s = 0.0;
        for (std::size_t j = 0; j < m.size(); ++j) {
            const double v = phit(j);
            s += quad_weight(m, j) * v * v * m.phi_x[j];
        }
        return s;
    };

    // Sliding window of three consecutive maps.
    win.push_back(fetch(0));
    win.push_back(fetch(1));
    win.push_back(fetch(2));
    for (std::size_t i = 0; i < nt; ++i) {
        double e;
        if (i == 0) {
            e = density(win[0], [&](std::size_t j) {
                return (-3.0 * win[0].phi[j] + 4.0 * win[1].phi[j] - win[2].phi[j]) / (2.0 * h);
            });
        } else if (i + 1 == nt) {
            e = density(win[2], [&](std::size_t j) {
                return (3.0 * win[2].phi[j] - 4.0 * win[1].phi[j] + win[0].phi[j]) / (2.0 * h);
            });
        } else {
            if (i >= 2) {
                win.erase(win.begin());
                win.push_back(fetch(i + 1));
            }
            e = density(win[1], [&](std::size_t j) { return (win[2].phi[j] - win[0].phi[j]) / (2.0 * h); });
        }
        const double w = (i == 0 || i + 1 == nt) ? 0.5 * h : h;
        out.energy += w * e;
        out.length += w * std::sqrt(std::max(e, 0.0));
    }
    return out;
}

inline PathMetrics measure_path(const PathSample& path) {
    if (path.maps.size() != path.times.size()) throw InvalidArgument("measure_path: times and maps differ in count");
    return measure_path([&](std::size_t i) { return path.maps[i]; }, path.times);
}

inline double path_energy(const PathSample& path) { return measure_path(path).energy; }
inline double path_length(const PathSample& path) { return measure_path(path).length; }

inline std::vector<double> uniform_times(double t0, double t1, double max_dt) {
    if (!(t1 > t0) || !(max_dt > 0.0)) throw InvalidArgument("uniform_times: bad interval");
    const auto steps = static_cast<std::size_t>(std::ceil((t1 - t0) / max_dt));
    std::vector<double> t(std::max<std::size_t>(steps, 2) + 1);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = t0 + (t1 - t0) * static_cast<double>(i) / (t.size() - 1);
    return t;
}

/// Default time step: 64 samples per unit transit time, and at least 16 per eps.
inline double wave_time_step(double eps) { return std::min(1.0 / 64.0, eps / 16.0); }

/// Energy of the basic wave over [t0, t1], sampled on its active window.
inline PathMetrics basic_wave_metrics(const CompressionWave& wave, double t0, double t1, double max_dt) {
    const auto [lo, hi] = wave.active_window(t0, t1);
    if (lo < -wave.spec().box || hi > wave.spec().box)
        throw InvalidArgument("basic_wave_metrics: wave leaves the window during [t0, t1]");
    const auto times = uniform_times(t0, t1, max_dt);
    return measure_path([&](std::size_t i) { return wave.at(times[i], lo, hi); }, times);
}

/// Energy and length of the start/stop path over its whole passage.
inline PathMetrics start_stop_metrics(const StartStopWave& wave, double max_dt) {
    const auto times = uniform_times(wave.t_begin(), wave.t_end(), max_dt);
    return measure_path([&](std::size_t i) { return wave.at(times[i]); }, times);
}

/// The straight path x + t g(x), t in [0, 1], sampled with the given number of cells.
inline PathMetrics linear_path_metrics(const Displacement& target, std::size_t cells, std::size_t steps = 64) {
    LineMap base;
    base.x0 = target.lo;
    base.dx = (target.hi - target.lo) / static_cast<double>(cells);
    std::vector<double> times(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) times[i] = static_cast<double>(i) / steps;
    return measure_path(
        [&](std::size_t i) {
            LineMap m = base;
            m.t = times[i];
            m.phi.resize(cells + 1);
            m.phi_x.resize(cells + 1);
            for (std::size_t j = 0; j <= cells; ++j) {
                const double x = m.node(j);
                m.phi[j] = x + m.t * target.g(x);
                m.phi_x[j] = 1.0 + m.t * target.dg(x);
            }
            return m;
        },
        times);
}

struct VanishRow {
    double eps = 0.0;
    double energy = 0.0;
    double length = 0.0;
    /// sqrt(E * duration) >= length.
    double length_bound = 0.0;
    double duration = 0.0;
    double dt = 0.0;
    double min_jacobian = 0.0;
    /// |E(dt) - E(dt/2)| / E(dt/2).
    double richardson = 0.0;
    /// sup |phi_end - x - g|.
    double endpoint_error = 0.0;
};

/// For each eps, the start/stop path from the identity to x + g(x): energy, length and
/// the bound sqrt(E * duration). Each eps is evaluated on its own worker.
inline std::vector<VanishRow> vanishing_demo(const Displacement& target, const std::vector<double>& eps_list,
                                             bool richardson = false) {
    auto run = [&target, richardson](double eps) {
        const StartStopWave wave(eps, target);
        const double dt = wave_time_step(eps);
        const PathMetrics m = start_stop_metrics(wave, dt);
        VanishRow r;
        r.eps = eps;
        r.energy = m.energy;
        r.length = m.length;
        r.duration = m.duration;
        r.length_bound = std::sqrt(m.energy * m.duration);
        r.dt = dt;
        r.min_jacobian = m.min_jacobian;
        r.endpoint_error = wave.at(wave.t_end()).displacement_error(target.g);
        if (richardson) {
            const PathMetrics fine = start_stop_metrics(wave, dt / 2);
            r.richardson = fine.energy > 0.0 ? std::abs(m.energy - fine.energy) / fine.energy : 0.0;
        }
        return r;
    };
    std::vector<std::future<VanishRow>> jobs;
    jobs.reserve(eps_list.size());
    for (double eps : eps_list) jobs.push_back(std::async(std::launch::async, run, eps));
    std::vector<VanishRow> rows;
    rows.reserve(jobs.size());
    for (auto& j : jobs) rows.push_back(j.get());
    return rows;
}

} // namespace geoflow
