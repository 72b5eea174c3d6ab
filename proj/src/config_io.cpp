#include "mcchan/config_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mcchan {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError(key, "expected a number, got '" + v + "'");
    }
    return out;
}

template <class Int>
Int parse_int(const std::string& key, const std::string& v) {
    Int out = 0;
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError(key, "expected an integer, got '" + v + "'");
    }
    return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") {
        return true;
    }
    if (v == "false" || v == "0") {
        return false;
    }
    throw ConfigError(key, "expected true/false, got '" + v + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_double(key, trim(item)));
    }
    if (out.empty()) {
        throw ConfigError(key, "expected a comma-separated list");
    }
    return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"D_A", [](auto& c, auto& k, auto& v) { c.physical.diffusion_molecule = parse_double(k, v); }},
        {"D_tx", [](auto& c, auto& k, auto& v) { c.physical.diffusion_tx = parse_double(k, v); }},
        {"D_rx", [](auto& c, auto& k, auto& v) { c.physical.diffusion_rx = parse_double(k, v); }},
        {"a_rx", [](auto& c, auto& k, auto& v) { c.physical.receiver_radius = parse_double(k, v); }},
        {"r_0", [](auto& c, auto& k, auto& v) { c.physical.initial_distance = parse_double(k, v); }},
        {"N_A", [](auto& c, auto& k, auto& v) { c.physical.molecules_per_bit = parse_int<std::int64_t>(k, v); }},
        {"n_A_bar", [](auto& c, auto& k, auto& v) { c.physical.noise_mean = parse_double(k, v); }},
        {"T", [](auto& c, auto& k, auto& v) { c.physical.bit_interval = parse_double(k, v); }},
        {"tau_s", [](auto& c, auto& k, auto& v) { c.physical.sampling_offset = parse_double(k, v); }},
        {"L", [](auto& c, auto& k, auto& v) { c.physical.sequence_length = parse_int<int>(k, v); }},
        {"P1", [](auto& c, auto& k, auto& v) { c.physical.prob_one = parse_double(k, v); }},
        {"dt", [](auto& c, auto& k, auto& v) { c.physical.time_step = parse_double(k, v); }},
        {"trials", [](auto& c, auto& k, auto& v) { c.physical.trials = parse_int<std::int64_t>(k, v); }},
        {"seed", [](auto& c, auto& k, auto& v) { c.physical.seed = parse_int<std::uint64_t>(k, v); }},
        {"mean_t_max", [](auto& c, auto& k, auto& v) { c.mean_t_max = parse_double(k, v); }},
        {"mean_t_step", [](auto& c, auto& k, auto& v) { c.mean_t_step = parse_double(k, v); }},
        {"acf_t1", [](auto& c, auto& k, auto& v) { c.acf_t1 = parse_double(k, v); }},
        {"acf_t2_span", [](auto& c, auto& k, auto& v) { c.acf_t2_span = parse_double(k, v); }},
        {"acf_t2_step", [](auto& c, auto& k, auto& v) { c.acf_t2_step = parse_double(k, v); }},
        {"eta", [](auto& c, auto& k, auto& v) { c.eta = parse_double(k, v); }},
        {"coherence_t_max", [](auto& c, auto& k, auto& v) { c.coherence_t_max = parse_double(k, v); }},
        {"dtx_sweep", [](auto& c, auto& k, auto& v) { c.dtx_sweep = parse_list(k, v); }},
        {"with_sim", [](auto& c, auto& k, auto& v) { c.with_sim = parse_bool(k, v); }},
        {"output", [](auto& c, auto&, auto& v) { c.output = v; }},
    };
    return table;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void require(bool ok, const char* key, const char* what) {
    if (!ok) {
        throw ConfigError(key, what);
    }
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig config;
    std::set<std::string> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno), "expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) {
            throw ConfigError(key, "unknown key");
        }
        if (!seen.insert(key).second) {
            throw ConfigError(key, "duplicate key");
        }
        if (value.empty()) {
            throw ConfigError(key, "missing value");
        }
        it->second(config, key, value);
    }
    validate(config.physical);
    return config;
}

ExperimentConfig parse_config_text(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config file '" + path + "'");
    }
    return parse_config(in);
}

void validate(const ExperimentConfig& c) {
    validate(c.physical);
    require(std::isfinite(c.mean_t_max) && c.mean_t_max >= 0.0, "mean_t_max", "must be >= 0");
    require(std::isfinite(c.mean_t_step) && c.mean_t_step > 0.0, "mean_t_step", "must be > 0");
    require(std::isfinite(c.acf_t1) && c.acf_t1 >= 0.0, "acf_t1", "must be >= 0");
    require(std::isfinite(c.acf_t2_span) && c.acf_t2_span > 0.0, "acf_t2_span", "must be > 0");
    require(std::isfinite(c.acf_t2_step) && c.acf_t2_step > 0.0 && c.acf_t2_step <= c.acf_t2_span,
            "acf_t2_step", "must lie in (0, acf_t2_span]");
    if (c.eta) {
        require(*c.eta > 0.0 && *c.eta < 1.0, "eta", "must lie in (0, 1)");
    }
    if (c.coherence_t_max) {
        require(std::isfinite(*c.coherence_t_max) && *c.coherence_t_max > 0.0, "coherence_t_max",
                "must be > 0");
    }
    require(!c.dtx_sweep.empty(), "dtx_sweep", "must not be empty");
    for (double d : c.dtx_sweep) {
        require(std::isfinite(d) && d > 0.0, "dtx_sweep", "values must be > 0");
    }
}

void write_config_echo(std::ostream& out, const ExperimentConfig& c) {
    const PhysicalConfig& p = c.physical;
    auto line = [&](const char* key, const std::string& value) {
        out << "# " << key << " = " << value << '\n';
    };
    line("D_A", fmt(p.diffusion_molecule));
    line("D_tx", fmt(p.diffusion_tx));
    line("D_rx", fmt(p.diffusion_rx));
    line("a_rx", fmt(p.receiver_radius));
    line("r_0", fmt(p.initial_distance));
    line("N_A", std::to_string(p.molecules_per_bit));
    line("n_A_bar", fmt(p.noise_mean));
    line("T", fmt(p.bit_interval));
    line("tau_s", fmt(p.sampling_offset));
    line("L", std::to_string(p.sequence_length));
    line("P1", fmt(p.prob_one));
    line("dt", fmt(p.time_step));
    line("trials", std::to_string(p.trials));
    line("seed", std::to_string(p.seed));
    line("mean_t_max", fmt(c.mean_t_max));
    line("mean_t_step", fmt(c.mean_t_step));
    line("acf_t1", fmt(c.acf_t1));
    line("acf_t2_span", fmt(c.acf_t2_span));
    line("acf_t2_step", fmt(c.acf_t2_step));
    line("eta", c.eta ? fmt(*c.eta) : std::string("unset"));
    line("coherence_t_max", fmt(c.coherence_horizon()));
    std::string sweep;
    for (double d : c.dtx_sweep) {
        sweep += (sweep.empty() ? "" : ",") + fmt(d);
    }
    line("dtx_sweep", sweep);
    line("with_sim", c.with_sim ? "true" : "false");
}

}  // namespace mcchan
