// mcchan: command-line front end for the diffusive mobile channel model.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mcchan/analytic.hpp"
#include "mcchan/config_io.hpp"
#include "mcchan/experiments.hpp"
#include "mcchan/model.hpp"

namespace {

struct Options {
    std::string config_path;
    bool with_sim = false;
    std::optional<std::int64_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<double> eta;
    std::optional<std::string> out;
};

mcchan::ExperimentConfig resolve(const Options& opt) {
    if (!std::ifstream(opt.config_path)) {
        throw mcchan::UsageError("cannot open config file '" + opt.config_path + "'");
    }
    mcchan::ExperimentConfig config = mcchan::load_config(opt.config_path);
    config.with_sim = config.with_sim || opt.with_sim;
    if (opt.trials) {
        config.physical.trials = *opt.trials;
    }
    if (opt.seed) {
        config.physical.seed = *opt.seed;
    }
    if (opt.eta) {
        config.eta = *opt.eta;
    }
    if (opt.out) {
        config.output = *opt.out;
    }
    mcchan::validate(config);
    return config;
}

int run(const std::string& command, const Options& opt) {
    const mcchan::ExperimentConfig config = resolve(opt);
    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!config.output.empty()) {
        file.open(config.output, std::ios::binary);
        if (!file) {
            throw mcchan::ConfigError("output", "cannot open '" + config.output + "' for writing");
        }
        out = &file;
    }
    if (command == "mean") {
        mcchan::cmd_mean(config, *out);
    } else if (command == "acf") {
        mcchan::cmd_acf(config, *out);
    } else if (command == "coherence") {
        mcchan::cmd_coherence(config, *out);
    } else if (command == "ber") {
        mcchan::cmd_ber(config, *out);
    } else {
        const mcchan::ValidationReport report = mcchan::cmd_validate(config, *out);
        if (!report.all_passed()) {
            for (const auto& c : report.checks) {
                if (!c.passed) {
                    std::cerr << "mcchan: check failed: " << c.name << '\n';
                }
            }
            return mcchan::kExitNumeric;
        }
    }
    out->flush();
    if (!*out) {
        std::cerr << "mcchan: write failed\n";
        return mcchan::kExitNumeric;
    }
    return mcchan::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Statistical model and simulator for a diffusive mobile molecular channel"};
    app.require_subcommand(1, 1);
    Options opt;
    const char* commands[][2] = {
        {"mean", "Expected received signal and normalized variance over time"},
        {"acf", "Normalized autocorrelation as a function of t2"},
        {"coherence", "Coherence time per swept D_tx"},
        {"ber", "Expected error probability per bit interval, perfect and outdated CSI"},
        {"validate", "Run the oracle suite against the closed forms"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", opt.config_path, "Config file (key = value)")->required();
        sub->add_flag("--with-sim", opt.with_sim, "Add particle-simulation columns");
        sub->add_option("--trials", opt.trials, "Monte-Carlo trials")->check(CLI::PositiveNumber);
        sub->add_option("--seed", opt.seed, "Base RNG seed");
        sub->add_option("--eta", opt.eta, "Correlation threshold in (0, 1)");
        sub->add_option("--out", opt.out, "Output CSV path (default: stdout)");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? mcchan::kExitOk : mcchan::kExitUsage;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return run(command, opt);
    } catch (const mcchan::ConfigError& e) {
        std::cerr << "mcchan: config error: " << e.what() << '\n';
        return mcchan::kExitValidation;
    } catch (const mcchan::UsageError& e) {
        std::cerr << "mcchan: usage error: " << e.what() << '\n';
        return mcchan::kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "mcchan: " << e.what() << '\n';
        return mcchan::kExitNumeric;
    }
}
