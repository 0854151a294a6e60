#pragma once

#include "evsource/io/dataset.hpp"

#include <optional>
#include <string>
#include <vector>

namespace evsource::cli {

inline constexpr const char* kToolVersion = "evsource 1.0.0";

/// Axis specification: either a single value or a min:max:count[:log] grid.
struct AxisSpec {
    double lo = 0.0;
    double hi = 0.0;
    int count = 1;
    bool log_spaced = false;

    static AxisSpec single(double v) { return {v, v, 1, false}; }
    std::vector<double> values() const;
};

/// Parses "v" or "min:max:count" or "min:max:count:log".
AxisSpec parse_axis(const std::string& text);

struct RunConfig {
    std::string command;              // density|flux|times|dit-map|figure|oracle-check
    std::optional<AxisSpec> v0;
    std::optional<AxisSpec> x;
    std::optional<AxisSpec> t;
    std::string preset;               // for the figure command
    std::string out_path;             // empty: stdout
    std::string format = "csv";       // csv|json
    double tol_quad = 1e-10;
    unsigned seed = 20240811;
    int points = 100;                 // oracle-check sample count
    bool unnormalized = false;        // density without flux normalization
};

/// Flat key=value config file with the same keys as the CLI flags;
/// explicit flags win over file entries.
void apply_config_file(RunConfig& config, const std::string& path,
                       const std::vector<std::string>& already_set);

/// Fixed column schemas, one per dataset kind (guarded by golden tests).
const std::vector<std::string>& density_columns();
const std::vector<std::string>& flux_columns();
const std::vector<std::string>& times_columns();
const std::vector<std::string>& dit_map_columns();
const std::vector<std::string>& oracle_check_columns();

/// Named figure presets bundling the model parameter sets used in the
/// standard plots, so datasets regenerate without hand-typed grids.
std::vector<std::string> preset_names();

/// Executes the configured command and writes its dataset.  Returns the
/// process exit status: 0 success, 2 usage error, 3 numerical failure
/// (an error record is printed to stderr in that case).
int run(const RunConfig& config);

} // namespace evsource::cli
