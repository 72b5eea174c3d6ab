#pragma once

#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcchan/config_io.hpp"
#include "mcchan/model.hpp"

// The `mcchan` subcommands. Each writes the resolved configuration as a `#`
// comment block followed by a CSV table to `out`.

namespace mcchan {

/// Bad command-line usage or an unusable grid; the CLI maps it to exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum ExitCode : int {
    kExitOk = 0,
    kExitValidation = 1,
    kExitUsage = 2,
    kExitNumeric = 3,
};

/// Columns t_s, NA_m_analytic, [NA_m_sim, sim_stderr,] var_norm_analytic.
void cmd_mean(const ExperimentConfig& config, std::ostream& out);

/// Columns t2_s and one rho column per swept D_tx, with t1 = acf_t1, tau = tau_s.
void cmd_acf(const ExperimentConfig& config, std::ostream& out);

/// Columns D_tx, eta, T_c_s, status. Rows whose horizon is exceeded carry an
/// empty T_c_s and a `not_reached` status.
void cmd_coherence(const ExperimentConfig& config, std::ostream& out);

/// Columns D_tx, D_rx, j, pe_perfect, pe_outdated, gap, se_perfect,
/// se_outdated for the static channel (D_tx = D_rx = 0) and every swept D_tx.
/// Each block ends with a j = mean row holding (1/L) sum_j pe.
void cmd_ber(const ExperimentConfig& config, std::ostream& out);

struct ValidationCheck {
    std::string name;
    double deviation = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    [[nodiscard]] bool all_passed() const;
};

using AcfFunction = std::function<double(double t1, double t2, double tau, double x0,
                                         const EffectiveDiffusion& eff)>;

/// Runs the oracle suite against `config`: quadrature checks of the mean and
/// both correlation forms, the Monte-Carlo correlation check, continuity at
/// t2 -> t1, an exhaustive threshold search and, for static channels, the
/// static equalities. `acf_impl` replaces the two-time correlation under test.
[[nodiscard]] ValidationReport run_validation(const ExperimentConfig& config,
                                              const AcfFunction& acf_impl = {});

/// Prints one line per check and a CSV-free summary; returns the report.
ValidationReport cmd_validate(const ExperimentConfig& config, std::ostream& out,
                              const AcfFunction& acf_impl = {});

}  // namespace mcchan
