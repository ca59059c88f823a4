// geoflow {solve|jacobi|curvature|vanish|verify} [--config FILE] [--set key=value ...] [--<key> value ...]
// Precedence: built-in defaults, then the config file, then --set, then named flags.

#include "geoflow/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

int main(int argc, char** argv) {
    CLI::App app{"Geodesic flows on diffeomorphism groups"};
    app.require_subcommand(1, 1);

    std::string config_path;
    std::vector<std::string> sets;
    std::map<std::string, std::string> flags;
    const std::map<std::string, std::string> help = {
        {"family", "metric family: h0, h1, h2, ... or ga"},
        {"A", "G^A parameter"},
        {"a", "central velocity (dispersion)"},
        {"n", "grid points"},
        {"dt", "time step"},
        {"T", "horizon, a multiple of dt"},
        {"ic", "zero | sine:amp:k | cosine:amp:k | bump:amp:width"},
        {"seed", "seed for randomized data"},
        {"out", "output directory (GEOFLOW_OUT overrides)"},
        {"stride", "write every stride-th time sample"},
        {"suite", "verify suite or 'all'"},
        {"case", "virasoro-sincos | burgers-sincos | virasoro-random | burgers-random"},
        {"a1", "central part of X1"},
        {"a2", "central part of X2"},
        {"count", "rows for random curvature cases"},
        {"eps", "comma-separated eps list"},
        {"target", "bump:amplitude:halfwidth | zero"}};

    for (const char* name : {"solve", "jacobi", "curvature", "vanish", "verify"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "flat key = value config file")->check(CLI::ExistingFile);
        sub->add_option("--set", sets, "override, key=value")->take_all();
        for (const auto& [key, text] : help) sub->add_option("--" + key, flags[key], text);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        geoflow::RunConfig cfg;
        if (!config_path.empty()) cfg = geoflow::RunConfig::from_file(config_path);
        cfg.command = app.get_subcommands().front()->get_name();
        for (const auto& kv : sets) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw geoflow::InvalidArgument("--set expects key=value, got '" + kv + "'");
            cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
        }
        auto* sub = app.get_subcommands().front();
        for (const auto& [key, value] : flags)
            if (sub->count("--" + key) > 0) cfg.set(key, value);
        return geoflow::run_command(cfg, std::cout);
    } catch (const geoflow::InvalidArgument& e) {
        std::cerr << "geoflow: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "geoflow: " << e.what() << '\n';
        return 4;
    }
}
