#pragma once
// Counter-based deterministic randomness for property batches: the value drawn
// at (seed, counter) never depends on what else was drawn.

#include "geoflow/diffeo.hpp"
#include "geoflow/grid.hpp"

#include <cmath>
#include <cstdint>

namespace geoflow {

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
        : key_(splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL))) {}

    std::uint64_t next() noexcept { return splitmix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }
    /// Uniform in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    std::uint64_t counter() const noexcept { return counter_; }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// sum_{m=1}^{modes} (a_m cos mx + b_m sin mx) / m with a_m, b_m uniform in [-amp, amp],
/// plus a mean in [-mean, mean]. Wavenumbers are scaled to the grid circumference.
inline Field random_trig(const Grid& grid, CounterRng& rng, int modes = 4, double amp = 1.0, double mean = 0.0) {
    std::vector<double> a(modes + 1), b(modes + 1);
    for (int m = 1; m <= modes; ++m) {
        a[m] = rng.uniform(-amp, amp) / m;
        b[m] = rng.uniform(-amp, amp) / m;
    }
    const double c0 = mean > 0.0 ? rng.uniform(-mean, mean) : 0.0;
    const double k1 = grid.wavenumber(1);
    return Field::sample(grid, [&](double x) {
        double s = c0;
        for (int m = 1; m <= modes; ++m) s += a[m] * std::cos(m * k1 * x) + b[m] * std::sin(m * k1 * x);
        return s;
    });
}

/// A diffeomorphism x + g(x) with g a random trigonometric polynomial scaled so that
/// max |g'| = slope < 1.
inline Diffeo random_diffeo(const Grid& grid, CounterRng& rng, int modes = 3, double slope = 0.3) {
    Field g = random_trig(grid, rng, modes, 1.0, 1.0);
    const double s = deriv(g, 1).max_abs();
    if (s > 0.0) g *= slope / s;
    return Diffeo(std::move(g));
}

} // namespace geoflow
