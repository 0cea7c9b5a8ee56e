// Named figure scenarios and the file writer behind the command-line tool.

#pragma once

#include "dlambda/dynamics.hpp"
#include "dlambda/model.hpp"
#include "dlambda/output.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dlambda {

/// Bad command-line input: unknown scenario, unknown override key, value that
/// does not parse, unwritable output directory.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<std::string_view> scenario_names();

/// Everything a scenario reads. Named scenarios fill in their own defaults;
/// `--set key=value` overrides apply on top.
struct ScenarioSettings {
    SystemParams params;              // pump phases are set per phi_r value
    std::vector<double> phi_r;
    double alpha_max = 100.0;         // phase traces and alpha sweeps
    std::size_t samples = 501;        // points per trace or sweep
    double delta_min = -10.0;         // detuning axis (spectra, Delta scans)
    double delta_max = 10.0;
    double pulse_length = 400.0;
    double edge_time = 5.0;
    PulseShape shape = PulseShape::Square;
    SimGrid grid;
};

struct Override {
    std::string key;
    std::string value;
};

/// Parses "key=value". Throws UsageError when there is no '='.
Override parse_override(std::string_view text);

/// Defaults for a named scenario. Throws UsageError for an unknown name.
ScenarioSettings default_settings(std::string_view scenario);

/// Applies one override in place. Keys mirror SystemParams and SimGrid field
/// names plus the ScenarioSettings extras; phi_r takes a comma separated list.
void apply_override(ScenarioSettings& settings, const Override& ov);

struct Formats {
    bool csv = true;
    bool ndjson = true;
    bool svg = true;
};

/// "csv,ndjson,svg" style list. Throws UsageError for an unknown entry.
Formats parse_formats(std::string_view list);

struct Plot {
    std::string suffix; // file name is <stem>_<suffix>.svg
    PlotSpec spec;
};

/// One emitted table. Its plots are rendered when SVG output is requested.
struct Artifact {
    std::string stem;
    Table table;
    std::vector<Plot> plots;
};

struct ScenarioOutput {
    std::vector<Artifact> artifacts;
    std::vector<std::string> summary; // lines for standard output
};

/// Runs the numerics of a scenario without touching the file system.
ScenarioOutput compute_scenario(std::string_view scenario, const ScenarioSettings& settings);

/// Header lines recorded at the top of every file.
Metadata scenario_metadata(std::string_view scenario, const ScenarioSettings& settings,
                           const std::vector<Override>& overrides);

struct RunRequest {
    std::string scenario;
    std::filesystem::path out_dir = ".";
    Formats formats;
    std::vector<Override> overrides;
};

struct RunResult {
    std::vector<std::filesystem::path> files;
    std::vector<std::string> summary;
};

/// Full pipeline: defaults, overrides, computation, files. Throws UsageError
/// or DomainError.
RunResult run_scenario(const RunRequest& request);

} // namespace dlambda
