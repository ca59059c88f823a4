#pragma once
// Run configuration: flat "key = value" text, command-line overrides on top,
// and initial-condition presets.

#include "geoflow/error.hpp"
#include "geoflow/grid.hpp"
#include "geoflow/metrics.hpp"
#include "geoflow/vanish.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace geoflow {

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(trim(cur));
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

inline double to_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto* end = v.data() + v.size();
    const auto r = std::from_chars(v.data(), end, out);
    if (r.ec != std::errc() || r.ptr != end || !std::isfinite(out))
        throw InvalidArgument("config: '" + key + "' expects a number, got '" + v + "'");
    return out;
}

template <class Int>
Int to_int(const std::string& key, const std::string& v) {
    Int out = 0;
    const auto* end = v.data() + v.size();
    const auto r = std::from_chars(v.data(), end, out);
    if (r.ec != std::errc() || r.ptr != end)
        throw InvalidArgument("config: '" + key + "' expects an integer, got '" + v + "'");
    return out;
}

/// Shortest text that parses back to the same double.
inline std::string format_double(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

} // namespace detail

struct RunConfig {
    std::string command = "solve";
    /// h<k> or ga; the G^A parameter lives in A.
    std::string family = "h0";
    double A = 1.0;
    /// Central velocity component (KdV dispersion for h0).
    double a = 0.0;
    std::size_t n = 256;
    double dt = 1e-3;
    double T = 1.0;
    std::string ic = "sine:0.2:1";
    std::uint64_t seed = 1;
    std::string out = "geoflow-out";
    /// Write every stride-th trajectory state.
    std::size_t stride = 1;
    std::string suite = "algebra";
    std::string curvature_case = "virasoro-sincos";
    double a1 = 0.0;
    double a2 = 0.0;
    std::size_t count = 20;
    std::string eps = "0.2,0.1,0.05";
    /// bump:<amplitude>:<halfwidth>, centred at 0.
    std::string target = "bump:0.3:1";

    bool operator==(const RunConfig&) const = default;

    static const std::vector<std::string>& keys() {
        static const std::vector<std::string> k = {"command", "family", "A",     "a",     "n",     "dt",
                                                   "T",       "ic",     "seed",  "out",   "stride", "suite",
                                                   "case",    "a1",     "a2",    "count", "eps",   "target"};
        return k;
    }

    void set(const std::string& key_in, const std::string& value_in) {
        const std::string key = detail::trim(key_in);
        const std::string v = detail::trim(value_in);
        if (key == "command") command = v;
        else if (key == "family") family = v;
        else if (key == "A") A = detail::to_double(key, v);
        else if (key == "a") a = detail::to_double(key, v);
        else if (key == "n") n = detail::to_int<std::size_t>(key, v);
        else if (key == "dt") dt = detail::to_double(key, v);
        else if (key == "T") T = detail::to_double(key, v);
        else if (key == "ic") ic = v;
        else if (key == "seed") seed = detail::to_int<std::uint64_t>(key, v);
        else if (key == "out") out = v;
        else if (key == "stride") stride = detail::to_int<std::size_t>(key, v);
        else if (key == "suite") suite = v;
        else if (key == "case") curvature_case = v;
        else if (key == "a1") a1 = detail::to_double(key, v);
        else if (key == "a2") a2 = detail::to_double(key, v);
        else if (key == "count") count = detail::to_int<std::size_t>(key, v);
        else if (key == "eps") eps = v;
        else if (key == "target") target = v;
        else throw InvalidArgument("config: unknown key '" + key + "'");
    }

    std::string get(const std::string& key) const {
        using detail::format_double;
        if (key == "command") return command;
        if (key == "family") return family;
        if (key == "A") return format_double(A);
        if (key == "a") return format_double(a);
        if (key == "n") return std::to_string(n);
        if (key == "dt") return format_double(dt);
        if (key == "T") return format_double(T);
        if (key == "ic") return ic;
        if (key == "seed") return std::to_string(seed);
        if (key == "out") return out;
        if (key == "stride") return std::to_string(stride);
        if (key == "suite") return suite;
        if (key == "case") return curvature_case;
        if (key == "a1") return format_double(a1);
        if (key == "a2") return format_double(a2);
        if (key == "count") return std::to_string(count);
        if (key == "eps") return eps;
        if (key == "target") return target;
        throw InvalidArgument("config: unknown key '" + key + "'");
    }

    /// One "key = value" line per key in a fixed order.
    std::string to_text() const {
        std::string s;
        for (const auto& k : keys()) s += k + " = " + get(k) + "\n";
        return s;
    }

    /// Blank lines and lines starting with '#' are ignored; later keys override earlier ones.
    static RunConfig from_text(const std::string& text, RunConfig base) {
        std::istringstream is(text);
        std::string line;
        int lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            const std::string t = detail::trim(line);
            if (t.empty() || t[0] == '#') continue;
            const auto eq = t.find('=');
            if (eq == std::string::npos)
                throw InvalidArgument("config: line " + std::to_string(lineno) + " is not 'key = value'");
            base.set(t.substr(0, eq), t.substr(eq + 1));
        }
        return base;
    }

    static RunConfig from_file(const std::string& path, RunConfig base) {
        std::ifstream is(path);
        if (!is) throw InvalidArgument("config: cannot read " + path);
        std::stringstream ss;
        ss << is.rdbuf();
        return from_text(ss.str(), std::move(base));
    }

    InertiaSpec spec() const {
        if (family == "ga" || family == "GA") return InertiaSpec::ga(A);
        return InertiaSpec::parse(family);
    }

    std::vector<double> eps_list() const {
        std::vector<double> out;
        for (const auto& p : detail::split(eps, ',')) out.push_back(detail::to_double("eps", p));
        return out;
    }

    Grid grid() const { return Grid(n); }

    static RunConfig from_text(const std::string& text);
    static RunConfig from_file(const std::string& path);

    void validate() const;
};

inline RunConfig RunConfig::from_text(const std::string& text) { return from_text(text, RunConfig()); }
inline RunConfig RunConfig::from_file(const std::string& path) { return from_file(path, RunConfig()); }

/// Initial velocity presets: "zero", "sine:<amp>:<k>", "cosine:<amp>:<k>",
/// "bump:<amp>:<width>" (centred in the box, width as a fraction of the length).
inline Field initial_condition(const Grid& grid, const std::string& desc) {
    const auto parts = detail::split(desc, ':');
    const std::string& kind = parts.empty() ? desc : parts[0];
    auto num = [&](std::size_t i, double fallback) {
        return i < parts.size() ? detail::to_double("ic", parts[i]) : fallback;
    };
    if (kind == "zero" && parts.size() == 1) return Field(grid);
    if ((kind == "sine" || kind == "cosine") && parts.size() <= 3) {
        const double amp = num(1, 0.2), kmode = num(2, 1.0);
        if (kmode != std::round(kmode) || kmode < 0.0 || kmode >= static_cast<double>(grid.nyquist()))
            throw InvalidArgument("ic: wavenumber must be an integer in [0, n/2)");
        const double k = grid.wavenumber(1) * kmode;
        const bool s = kind == "sine";
        return Field::sample(grid, [=](double x) { return amp * (s ? std::sin(k * x) : std::cos(k * x)); });
    }
    if (kind == "bump" && parts.size() <= 3) {
        const double amp = num(1, 0.2), width = num(2, 0.25);
        if (!(width > 0.0 && width <= 0.5)) throw InvalidArgument("ic: bump width must lie in (0, 0.5]");
        const double c = grid.origin() + 0.5 * grid.length(), hw = width * grid.length();
        return Field::sample(grid, [=](double x) {
            const double r = (x - c) / hw;
            return std::abs(r) < 1.0 ? amp * std::exp(1.0 - 1.0 / (1.0 - r * r)) : 0.0;
        });
    }
    throw InvalidArgument("ic: unknown initial condition '" + desc + "'");
}

/// "bump:<amplitude>:<halfwidth>" or "zero".
inline Displacement target_displacement(const std::string& desc) {
    const auto parts = detail::split(desc, ':');
    if (desc == "zero") return Displacement::zero();
    if (!parts.empty() && parts[0] == "bump" && parts.size() <= 3) {
        const double amp = parts.size() > 1 ? detail::to_double("target", parts[1]) : 0.3;
        const double hw = parts.size() > 2 ? detail::to_double("target", parts[2]) : 1.0;
        return Displacement::bump(amp, 0.0, hw);
    }
    throw InvalidArgument("target: unknown displacement '" + desc + "'");
}

inline void RunConfig::validate() const {
    static const std::vector<std::string> commands = {"solve", "jacobi", "curvature", "vanish", "verify"};
    if (std::find(commands.begin(), commands.end(), command) == commands.end())
        throw InvalidArgument("config: unknown command '" + command + "'");
    (void)spec();
    if (!(std::abs(a) <= 1e3)) throw InvalidArgument("config: |a| must be <= 1000");
    if (n < 8 || n > (1u << 16) || n % 2 != 0) throw InvalidArgument("config: n must be even and in [8, 65536]");
    if (!(dt > 0.0 && dt <= 1.0)) throw InvalidArgument("config: dt must lie in (0, 1]");
    if (!(T >= 0.0 && T <= 1e4)) throw InvalidArgument("config: T must lie in [0, 1e4]");
    const double steps = std::round(T / dt);
    if (std::abs(steps * dt - T) > 1e-9 * std::max(1.0, T))
        throw InvalidArgument("config: T must be an integer multiple of dt");
    if (stride < 1) throw InvalidArgument("config: stride must be >= 1");
    if (count < 1 || count > 100000) throw InvalidArgument("config: count must lie in [1, 100000]");
    if (out.empty()) throw InvalidArgument("config: out must not be empty");
    (void)initial_condition(Grid(n), ic);
    for (double e : eps_list())
        if (!(e > 0.0 && e <= 0.3)) throw InvalidArgument("config: each eps must lie in (0, 0.3]");
    (void)target_displacement(target);
}

/// GEOFLOW_OUT, when set and non-empty, replaces the configured output root.
inline std::filesystem::path output_root(const RunConfig& cfg) {
    if (const char* env = std::getenv("GEOFLOW_OUT"); env && *env) return std::filesystem::path(env);
    return std::filesystem::path(cfg.out);
}

} // namespace geoflow
