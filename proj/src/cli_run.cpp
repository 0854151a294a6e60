#include "evsource/cli.hpp"

#include "evsource/analysis.hpp"
#include "evsource/contour.hpp"
#include "evsource/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace evsource::cli {
namespace {

using io::Dataset;
using io::format_double;

std::string error_kind(const Error& e) {
    if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
    if (dynamic_cast<const InvalidInputError*>(&e)) return "InvalidInput";
    if (dynamic_cast<const OverflowRegionError*>(&e)) return "OverflowRegion";
    if (dynamic_cast<const QuiescenceViolatedError*>(&e)) return "QuiescenceViolated";
    if (dynamic_cast<const PoleProximityError*>(&e)) return "PoleProximity";
    if (dynamic_cast<const RangeError*>(&e)) return "RangeError";
    if (dynamic_cast<const NoMinimumError*>(&e)) return "NoMinimum";
    if (dynamic_cast<const NoCrossingError*>(&e)) return "NoCrossing";
    if (dynamic_cast<const ConvergenceError*>(&e)) return "ConvergenceError";
    return "Error";
}

[[noreturn]] void fail_cell(const Error& e, double v0, double x, double t) {
    std::ostringstream record;
    record << "{\"error\": \"" << error_kind(e) << "\", \"message\": \""
           << e.what() << "\", \"cell\": {\"v0\": " << format_double(v0)
           << ", \"x\": " << format_double(x)
           << ", \"t\": " << format_double(t) << "}}";
    throw std::runtime_error(record.str());
}

std::string scenario_name(Scenario s) {
    switch (s) {
        case Scenario::NoCrossing: return "no-crossing";
        case Scenario::SingleCrossing: return "single-crossing";
        case Scenario::DoubleCrossing: return "double-crossing";
    }
    return "?";
}

void base_metadata(Dataset& d, const RunConfig& config) {
    d.metadata["tool"] = kToolVersion;
    d.metadata["command"] = config.command;
    if (!config.preset.empty()) d.metadata["preset"] = config.preset;
    d.metadata["format"] = config.format;
    d.metadata["tol_quad"] = format_double(config.tol_quad);
}

std::vector<double> axis_or(const std::optional<AxisSpec>& axis,
                            const AxisSpec& fallback) {
    return axis ? axis->values() : fallback.values();
}

Dataset make_density(const RunConfig& config) {
    Dataset d;
    d.columns = density_columns();
    base_metadata(d, config);
    d.metadata["normalized"] = config.unnormalized ? "false" : "true";
    const auto v0s = axis_or(config.v0, AxisSpec::single(0.05));
    const auto xs = axis_or(config.x, AxisSpec::single(1.5));
    const auto ts = axis_or(config.t, AxisSpec{0.1, 40.0, 2000, false});
    for (double v0 : v0s) {
        const SourceParams p = make_params(v0);
        double scale = 1.0;
        if (!config.unnormalized) scale = 1.0 / norm_factor_cached(p);
        for (double x : xs) {
            for (double t : ts) {
                try {
                    const Complex psi = psi_exact(p, x, t);
                    const WaveDecomposition w = decompose(p, x, t);
                    d.rows.push_back({format_double(v0), format_double(x),
                                      format_double(t),
                                      format_double(std::norm(psi) * scale),
                                      format_double(std::norm(w.psi_saddle) * scale),
                                      format_double(std::norm(w.psi_pole) * scale),
                                      format_double(psi_interference(p, x, t) * scale),
                                      format_double(std::norm(w.psi_approx) * scale)});
                } catch (const Error& e) {
                    fail_cell(e, v0, x, t);
                }
            }
        }
    }
    return d;
}

Dataset make_flux(const RunConfig& config) {
    Dataset d;
    d.columns = flux_columns();
    base_metadata(d, config);
    const auto v0s = axis_or(config.v0, AxisSpec::single(0.25));
    const auto xs = axis_or(config.x, AxisSpec::single(0.0));
    const auto ts = axis_or(config.t, AxisSpec{0.01, 12.0, 1200, false});
    for (double v0 : v0s) {
        const SourceParams p = make_params(v0);
        for (double x : xs) {
            for (double t : ts) {
                try {
                    d.rows.push_back({format_double(v0), format_double(x),
                                      format_double(t),
                                      format_double(flux(p, x, t))});
                } catch (const Error& e) {
                    fail_cell(e, v0, x, t);
                }
            }
        }
    }
    return d;
}

Dataset make_times(const RunConfig& config) {
    Dataset d;
    d.columns = times_columns();
    base_metadata(d, config);
    const auto v0s = axis_or(config.v0, AxisSpec::single(0.1));
    const auto xs = axis_or(config.x, AxisSpec{0.02, 3.0, 60, true});
    TpScan scan;
    try {
        scan = t_p_scan(v0s, xs);
    } catch (const Error& e) {
        fail_cell(e, v0s.empty() ? 0 : v0s.front(), xs.empty() ? 0 : xs.front(), 0);
    }
    for (std::size_t i = 0; i < scan.cells.size(); ++i) {
        const double v0 = v0s[i / xs.size()];
        const double x = xs[i % xs.size()];
        const TimeScales& ts = scan.cells[i];
        d.rows.push_back(
            {format_double(v0), format_double(x), format_double(ts.t_c),
             format_double(ts.bl_time), format_double(ts.t_max_saddle),
             scenario_name(ts.scenario),
             format_double(static_cast<double>(ts.crossings.size())),
             ts.crossings.empty() ? "" : format_double(ts.crossings.front()),
             ts.t_p ? format_double(*ts.t_p) : ""});
    }
    return d;
}

Dataset make_density_at_tp(const RunConfig& config) {
    Dataset d;
    d.columns = {"v0", "x", "t_p", "density"};
    base_metadata(d, config);
    const auto v0s = axis_or(config.v0, AxisSpec::single(0.25));
    const auto xs = axis_or(config.x, AxisSpec{0.02, 3.0, 60, true});
    for (double v0 : v0s) {
        const SourceParams p = make_params(v0);
        for (double x : xs) {
            try {
                const TimeScales ts = classify_crossings(p, x);
                if (ts.t_p) {
                    d.rows.push_back({format_double(v0), format_double(x),
                                      format_double(*ts.t_p),
                                      format_double(std::norm(
                                          psi_normalized(p, x, *ts.t_p)))});
                } else {
                    d.rows.push_back({format_double(v0), format_double(x), "", ""});
                }
            } catch (const Error& e) {
                fail_cell(e, v0, x, 0);
            }
        }
    }
    return d;
}

Dataset make_norm_factor(const RunConfig& config) {
    Dataset d;
    d.columns = {"v0", "norm_factor"};
    base_metadata(d, config);
    const auto v0s = axis_or(config.v0, AxisSpec{1e-3, 0.999, 40, true});
    for (double v0 : v0s) {
        try {
            d.rows.push_back({format_double(v0),
                              format_double(norm_factor(make_params(v0)))});
        } catch (const Error& e) {
            fail_cell(e, v0, 0, 0);
        }
    }
    return d;
}

Dataset make_dit_map(const RunConfig& config) {
    Dataset d;
    d.columns = dit_map_columns();
    base_metadata(d, config);
    const auto v0s = axis_or(config.v0, AxisSpec{0.01, 0.999, 40, true});
    const auto xs = axis_or(config.x, AxisSpec{0.05, 50.0, 60, true});
    DITMap map;
    try {
        map = dit_amplitude_map(v0s, xs);
    } catch (const Error& e) {
        fail_cell(e, v0s.empty() ? 0 : v0s.front(), xs.empty() ? 0 : xs.front(), 0);
    }
    for (std::size_t i = 0; i < map.cells.size(); ++i) {
        const double v0 = v0s[i / xs.size()];
        const double x = xs[i % xs.size()];
        if (map.cells[i]) {
            d.rows.push_back({format_double(v0), format_double(x),
                              format_double(map.cells[i]->t_min1),
                              format_double(map.cells[i]->amplitude)});
        } else {
            d.rows.push_back({format_double(v0), format_double(x), "", ""});
        }
    }
    return d;
}

Dataset make_oracle_check(const RunConfig& config) {
    Dataset d;
    d.columns = oracle_check_columns();
    base_metadata(d, config);
    d.metadata["seed"] = std::to_string(config.seed);
    d.metadata["points"] = std::to_string(config.points);
    std::mt19937 rng(config.seed);
    std::uniform_real_distribution<double> uv(0.0, 1.0);
    std::uniform_real_distribution<double> ux(0.1, 10.0);
    std::uniform_real_distribution<double> ut(std::log(0.05), std::log(50.0));
    double worst = 0.0;
    int generated = 0;
    while (generated < config.points) {
        const double v0 = uv(rng);
        const double x = ux(rng);
        const double t = std::exp(ut(rng));
        const SourceParams p = make_params(v0);
        if (std::fabs(t - critical_time(p, x)) < 0.01) continue;
        ContourOptions opt;
        opt.rel_tol = config.tol_quad;
        try {
            const Complex quad = psi_quadrature(p, x, t, opt);
            const Complex exact = psi_exact(p, x, t);
            const double err =
                std::abs(quad - exact) / std::max(std::abs(exact), 1e-300);
            worst = std::max(worst, err);
            d.rows.push_back({format_double(v0), format_double(x),
                              format_double(t), format_double(err)});
            ++generated;
        } catch (const PoleProximityError&) {
            continue; // resample: the draw landed inside the clearance band
        } catch (const Error& e) {
            fail_cell(e, v0, x, t);
        }
    }
    d.metadata["max_rel_error"] = format_double(worst);
    return d;
}

Dataset dispatch(const RunConfig& config) {
    if (config.command == "density") return make_density(config);
    if (config.command == "flux") return make_flux(config);
    if (config.command == "times") return make_times(config);
    if (config.command == "dit-map") return make_dit_map(config);
    if (config.command == "oracle-check") return make_oracle_check(config);
    if (config.command == "figure") {
        RunConfig preset = config;
        if (config.preset == "flux-origin") {
            // Flux at the source for the four standard injection speeds.
            Dataset d;
            d.columns = flux_columns();
            base_metadata(d, preset);
            const auto ts = axis_or(config.t, AxisSpec{0.01, 12.0, 1200, false});
            for (double v0 : {1e-3, 0.25, 0.5, 0.999}) {
                const SourceParams p = make_params(v0);
                for (double t : ts) {
                    d.rows.push_back({format_double(v0), "0", format_double(t),
                                      format_double(flux(p, 0.0, t))});
                }
            }
            return d;
        }
        if (config.preset == "norm-factor") return make_norm_factor(preset);
        if (config.preset == "forerunner") {
            preset.command = "density";
            preset.v0 = AxisSpec::single(0.0);
            preset.x = AxisSpec::single(1.0);
            preset.t = AxisSpec{0.01, 100.0, 1500, true};
            preset.unnormalized = true; // v0 = 0 has no flux normalization
            return make_density(preset);
        }
        if (config.preset == "ratio") {
            preset.v0 = AxisSpec::single(0.1);
            Dataset d;
            d.columns = {"v0", "x", "t", "ratio"};
            base_metadata(d, preset);
            const auto ts = axis_or(config.t, AxisSpec{0.01, 200.0, 2000, true});
            for (double x : {0.1, 1.0, 2.5, 4.0}) {
                const SourceParams p = make_params(0.1);
                for (double t : ts) {
                    d.rows.push_back({format_double(0.1), format_double(x),
                                      format_double(t),
                                      format_double(ratio_R(p, x, t))});
                }
            }
            return d;
        }
        if (config.preset == "tp-vs-x") {
            Dataset d;
            d.columns = times_columns();
            base_metadata(d, preset);
            RunConfig sub = preset;
            for (double v0 : {0.1, 0.25, 0.5, 0.9}) {
                sub.v0 = AxisSpec::single(v0);
                sub.x = config.x ? config.x : std::optional<AxisSpec>(AxisSpec{0.02, 3.0, 60, true});
                Dataset part = make_times(sub);
                d.rows.insert(d.rows.end(), part.rows.begin(), part.rows.end());
            }
            return d;
        }
        if (config.preset == "density-at-tp") {
            Dataset d;
            d.columns = {"v0", "x", "t_p", "density"};
            base_metadata(d, preset);
            RunConfig sub = preset;
            for (double v0 : {0.1, 0.25, 0.5, 0.9}) {
                sub.v0 = AxisSpec::single(v0);
                sub.x = config.x ? config.x : std::optional<AxisSpec>(AxisSpec{0.02, 3.0, 60, true});
                Dataset part = make_density_at_tp(sub);
                d.rows.insert(d.rows.end(), part.rows.begin(), part.rows.end());
            }
            return d;
        }
        if (config.preset == "dit-trace") {
            preset.command = "density";
            preset.v0 = AxisSpec::single(0.05);
            preset.x = AxisSpec::single(1.5);
            if (!preset.t) preset.t = AxisSpec{0.1, 40.0, 2000, false};
            return make_density(preset);
        }
        if (config.preset == "dit-map") {
            preset.command = "dit-map";
            if (!preset.v0) preset.v0 = AxisSpec{0.01, 0.3, 40, true};
            if (!preset.x) preset.x = AxisSpec{0.05, 8.0, 60, true};
            return make_dit_map(preset);
        }
        throw DomainError("unknown figure preset: " + config.preset);
    }
    throw DomainError("unknown command: " + config.command);
}

} // namespace

std::vector<double> AxisSpec::values() const {
    if (count <= 1) return {lo};
    return make_grid(lo, hi, count, log_spaced);
}

AxisSpec parse_axis(const std::string& text) {
    std::vector<std::string> parts;
    std::string token;
    std::istringstream stream(text);
    while (std::getline(stream, token, ':')) parts.push_back(token);
    try {
        if (parts.size() == 1) {
            return AxisSpec::single(std::stod(parts[0]));
        }
        if (parts.size() == 3 || parts.size() == 4) {
            AxisSpec axis;
            axis.lo = std::stod(parts[0]);
            axis.hi = std::stod(parts[1]);
            axis.count = std::stoi(parts[2]);
            axis.log_spaced = parts.size() == 4 && parts[3] == "log";
            if (parts.size() == 4 && parts[3] != "log" && parts[3] != "lin") {
                throw DomainError("axis spacing must be lin or log: " + text);
            }
            if (axis.count < 2) {
                throw DomainError("grid counts must be >= 2: " + text);
            }
            return axis;
        }
    } catch (const std::invalid_argument&) {
    } catch (const std::out_of_range&) {
    }
    throw DomainError("cannot parse axis spec: " + text);
}

void apply_config_file(RunConfig& config, const std::string& path,
                       const std::vector<std::string>& already_set) {
    std::ifstream stream(path);
    if (!stream) throw DomainError("cannot open config file: " + path);
    const auto is_set = [&](const std::string& key) {
        return std::find(already_set.begin(), already_set.end(), key) !=
               already_set.end();
    };
    std::string line;
    while (std::getline(stream, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || is_set(key)) continue;
        if (key == "command") config.command = value;
        else if (key == "v0") config.v0 = parse_axis(value);
        else if (key == "x") config.x = parse_axis(value);
        else if (key == "t") config.t = parse_axis(value);
        else if (key == "preset") config.preset = value;
        else if (key == "out") config.out_path = value;
        else if (key == "format") config.format = value;
        else if (key == "tol-quad") config.tol_quad = std::stod(value);
        else if (key == "seed") config.seed = static_cast<unsigned>(std::stoul(value));
        else if (key == "points") config.points = std::stoi(value);
        else if (key == "unnormalized") config.unnormalized = (value == "true" || value == "1");
        else throw DomainError("unknown config key: " + key);
    }
}

const std::vector<std::string>& density_columns() {
    static const std::vector<std::string> c = {
        "v0", "x", "t", "density", "density_saddle", "density_pole",
        "interference", "density_approx"};
    return c;
}

const std::vector<std::string>& flux_columns() {
    static const std::vector<std::string> c = {"v0", "x", "t", "flux"};
    return c;
}

const std::vector<std::string>& times_columns() {
    static const std::vector<std::string> c = {
        "v0", "x", "t_c", "bl_time", "t_max_saddle",
        "scenario", "n_crossings", "t_first", "t_p"};
    return c;
}

const std::vector<std::string>& dit_map_columns() {
    static const std::vector<std::string> c = {"v0", "x", "t_min1", "amplitude"};
    return c;
}

const std::vector<std::string>& oracle_check_columns() {
    static const std::vector<std::string> c = {"v0", "x", "t", "rel_error"};
    return c;
}

std::vector<std::string> preset_names() {
    return {"flux-origin", "norm-factor", "forerunner",    "ratio",
            "tp-vs-x",     "density-at-tp", "dit-trace",   "dit-map"};
}

int run(const RunConfig& config) {
    if (config.format != "csv" && config.format != "json") {
        std::cerr << "{\"error\": \"Usage\", \"message\": \"format must be csv or json\"}\n";
        return 2;
    }
    Dataset dataset;
    try {
        dataset = dispatch(config);
    } catch (const DomainError& e) {
        std::cerr << "{\"error\": \"Usage\", \"message\": \"" << e.what() << "\"}\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "{\"error\": \"" << error_kind(e) << "\", \"message\": \""
                  << e.what() << "\"}\n";
        return 3;
    } catch (const std::runtime_error& e) {
        // cell-annotated numerical failure
        std::cerr << e.what() << "\n";
        return 3;
    }
    const std::string text =
        config.format == "csv" ? io::to_csv(dataset) : io::to_json(dataset);
    try {
        if (config.out_path.empty()) {
            std::cout << text;
        } else {
            io::write_file(config.out_path, text);
        }
    } catch (const Error& e) {
        std::cerr << "{\"error\": \"Io\", \"message\": \"" << e.what() << "\"}\n";
        return 3;
    }
    return 0;
}

} // namespace evsource::cli
