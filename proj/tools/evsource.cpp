// Command-line front end: parses flags into a RunConfig and executes it.
#include "evsource/cli.hpp"
#include "evsource/errors.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Point-source quantum emission model: datasets for the "
                 "exact solution, its saddle/pole split, characteristic "
                 "times and oracle cross-checks"};
    app.require_subcommand(1);

    evsource::cli::RunConfig config;
    std::string v0_text, x_text, t_text, config_path;
    std::vector<std::string> grid_specs;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--v0", v0_text, "injection speed, value or min:max:count[:log]");
        sub->add_option("--x", x_text, "position, value or min:max:count[:log]");
        sub->add_option("--t", t_text, "time, value or min:max:count[:log]");
        sub->add_option("--grid", grid_specs,
                        "axis override in the form name=min:max:count[:log]");
        sub->add_option("--out", config.out_path, "output path (default: stdout)");
        sub->add_option("--format", config.format, "csv or json");
        sub->add_option("--tol-quad", config.tol_quad, "quadrature relative tolerance");
        sub->add_option("--seed", config.seed, "random seed for oracle-check");
        sub->add_option("--points", config.points, "sample count for oracle-check");
        sub->add_option("--config", config_path,
                        "flat key=value config file; explicit flags win");
        sub->add_flag("--unnormalized", config.unnormalized,
                      "skip flux normalization in density output");
    };

    for (const char* name : {"density", "flux", "times", "dit-map", "oracle-check"}) {
        add_common(app.add_subcommand(name));
    }
    CLI::App* figure = app.add_subcommand("figure");
    std::string preset;
    figure->add_option("preset", preset, "one of the named dataset presets")
        ->required();
    add_common(figure);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 2;
    }

    config.command = app.get_subcommands().front()->get_name();
    config.preset = preset;

    try {
        std::vector<std::string> set_flags;
        if (!v0_text.empty()) set_flags.push_back("v0");
        if (!x_text.empty()) set_flags.push_back("x");
        if (!t_text.empty()) set_flags.push_back("t");
        if (!config.out_path.empty()) set_flags.push_back("out");

        if (!v0_text.empty()) config.v0 = evsource::cli::parse_axis(v0_text);
        if (!x_text.empty()) config.x = evsource::cli::parse_axis(x_text);
        if (!t_text.empty()) config.t = evsource::cli::parse_axis(t_text);
        for (const std::string& spec : grid_specs) {
            const auto eq = spec.find('=');
            if (eq == std::string::npos) {
                throw evsource::DomainError("--grid expects name=spec: " + spec);
            }
            const std::string name = spec.substr(0, eq);
            const auto axis = evsource::cli::parse_axis(spec.substr(eq + 1));
            if (name == "v0") config.v0 = axis;
            else if (name == "x") config.x = axis;
            else if (name == "t") config.t = axis;
            else throw evsource::DomainError("--grid axis must be v0, x or t: " + name);
            set_flags.push_back(name);
        }
        if (!config_path.empty()) {
            evsource::cli::apply_config_file(config, config_path, set_flags);
        }
    } catch (const evsource::DomainError& e) {
        std::cerr << "{\"error\": \"Usage\", \"message\": \"" << e.what() << "\"}\n";
        return 2;
    }

    return evsource::cli::run(config);
}
