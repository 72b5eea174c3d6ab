#include "mcchan/model.hpp"

#include <algorithm>
#include <cmath>

namespace mcchan {

namespace {

void require(bool ok, const char* field, const char* what) {
    if (!ok) {
        throw ConfigError(field, what);
    }
}

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }
bool finite_pos(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

bool is_step_multiple(double duration, double step) {
    if (!(step > 0.0) || !std::isfinite(duration)) {
        return false;
    }
    const double ratio = duration / step;
    return std::abs(ratio - std::round(ratio)) <= 1e-9 * std::max(1.0, ratio);
}

std::int64_t step_count(double duration, double step) {
    return static_cast<std::int64_t>(std::llround(duration / step));
}

void validate(const PhysicalConfig& c) {
    require(finite_nonneg(c.diffusion_molecule), "D_A", "must be finite and >= 0");
    require(finite_nonneg(c.diffusion_tx), "D_tx", "must be finite and >= 0");
    require(finite_nonneg(c.diffusion_rx), "D_rx", "must be finite and >= 0");
    require(finite_pos(c.receiver_radius), "a_rx", "must be finite and > 0");
    require(finite_pos(c.initial_distance), "r_0", "must be finite and > 0");
    require(c.molecules_per_bit >= 0, "N_A", "must be >= 0");
    require(finite_nonneg(c.noise_mean), "n_A_bar", "must be finite and >= 0");
    require(finite_pos(c.bit_interval), "T", "must be finite and > 0");
    require(finite_pos(c.sampling_offset), "tau_s", "must be finite and > 0");
    require(c.sampling_offset <= c.bit_interval, "tau_s", "must not exceed T");
    require(c.sequence_length >= 1, "L", "must be >= 1");
    require(std::isfinite(c.prob_one) && c.prob_one >= 0.0 && c.prob_one <= 1.0, "P1",
            "must lie in [0, 1]");
    require(finite_pos(c.time_step), "dt", "must be finite and > 0");
    require(c.trials >= 1, "trials", "must be >= 1");
    require(is_step_multiple(c.sampling_offset, c.time_step), "dt", "must divide tau_s");
    require(is_step_multiple(c.bit_interval, c.time_step), "dt", "must divide T");
}

EffectiveDiffusion derive_effective(const PhysicalConfig& config) {
    validate(config);
    const double a = config.receiver_radius;
    return EffectiveDiffusion{
        .d1 = config.diffusion_molecule + config.diffusion_rx,
        .d2 = config.diffusion_rx + config.diffusion_tx,
        .volume = 4.0 / 3.0 * kPi * a * a * a,
    };
}

}  // namespace mcchan
