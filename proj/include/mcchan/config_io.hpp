#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mcchan/model.hpp"

namespace mcchan {

/// Physical parameters plus the selectors of the CLI experiments.
struct ExperimentConfig {
    PhysicalConfig physical;

    // mean: t = 0, step, ..., t_max
    double mean_t_max = 25e-3;
    double mean_t_step = 1e-3;

    // acf: t2 = t1 + step, ..., t1 + t2_span
    double acf_t1 = 0.0;
    double acf_t2_span = 25e-3;
    double acf_t2_step = 0.1e-3;

    // coherence
    std::optional<double> eta;
    std::optional<double> coherence_t_max;  // defaults to 100 T

    std::vector<double> dtx_sweep = {0.1e-13, 1e-13, 5e-13, 20e-13, 100e-13};
    bool with_sim = false;
    std::string output;  // empty: stdout

    [[nodiscard]] double coherence_horizon() const {
        return coherence_t_max.value_or(100.0 * physical.bit_interval);
    }
};

/// Parses flat `key = value` text: one pair per line, `#` starts a comment,
/// SI units. Unknown, duplicate or malformed keys raise ConfigError naming
/// the key; the physical block is validated before returning.
[[nodiscard]] ExperimentConfig parse_config(std::istream& in);
[[nodiscard]] ExperimentConfig parse_config_text(const std::string& text);

/// Throws std::runtime_error when the file cannot be opened.
[[nodiscard]] ExperimentConfig load_config(const std::string& path);

/// Checks the experiment selectors (grids, sweep, eta); throws ConfigError.
void validate(const ExperimentConfig& config);

/// Writes every resolved key as `# key = value`.
void write_config_echo(std::ostream& out, const ExperimentConfig& config);

}  // namespace mcchan
