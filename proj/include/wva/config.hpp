#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace wva {

enum class Command { pointer, ensemble, sweep, estimate };

std::string_view to_string(Command command) noexcept;

/// Declarative description of one CLI run. Keys of the JSON config file are
/// the flag names without the leading dashes ("n-atoms", "phi-grid", ...).
struct ExperimentConfig {
    Command command = Command::pointer;
    double kappa = 0.01;
    double phi = 0.1;
    double width = 1.0;
    double beta = 0.0;
    int n_atoms = 64;
    int n_photons = 1;
    std::int64_t n_trials = 100000;
    int fock_dim = 32;
    std::vector<double> phi_grid = {0.0, 0.03, 0.1, 0.3};
    std::uint64_t master_seed = 42;
    std::string output_path = ".";

    /// Throws validation naming the offending field and its bound.
    void validate() const;

    bool operator==(const ExperimentConfig&) const = default;
};

nlohmann::json to_json(const ExperimentConfig& config);

/// Overlays the fields present in `j` onto `base`. Unknown keys and wrong
/// types are validation errors.
ExperimentConfig apply_json(const nlohmann::json& j, ExperimentConfig base = {});

/// Reads a flat JSON object. Malformed files raise parse errors that name
/// the line and column.
ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base = {});

/// Flags override values from --config <path>; both override the defaults.
/// The result is validated.
ExperimentConfig parse_config(const std::vector<std::string>& args);

/// Writes the output files for `config` into config.output_path.
void run(const ExperimentConfig& config);

/// Full CLI: parse, run, report errors as a JSON object on `err`.
/// Exit codes: 0 success, 2 validation or parse error, 3 out-of-regime,
/// truncation or other model error, 4 I/O failure.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace wva
