#include "mcchan/detection.hpp"

#include <cmath>
#include <limits>

#include <boost/math/special_functions/gamma.hpp>

#include "mcchan/analytic.hpp"

namespace mcchan {

namespace {

double response(double distance, int lag, const PhysicalConfig& config,
                const EffectiveDiffusion& eff) {
    const double delay = lag * config.bit_interval + config.sampling_offset;
    return static_cast<double>(config.molecules_per_bit) * cir_conditional(distance, delay, eff);
}

void require_index(std::span<const std::uint8_t> bits, int j) {
    if (j < 1 || static_cast<std::size_t>(j) > bits.size()) {
        throw std::out_of_range("bit index j out of range");
    }
}

}  // namespace

double mean_received_perfect(std::span<const std::uint8_t> bits,
                             const RelativeTrajectory& trajectory, int j,
                             const PhysicalConfig& config) {
    require_index(bits, j);
    if (trajectory.samples.size() < static_cast<std::size_t>(j)) {
        throw std::out_of_range("trajectory shorter than bit index");
    }
    const EffectiveDiffusion eff = derive_effective(config);
    double mean = config.noise_mean;
    for (int i = 1; i <= j; ++i) {
        if (bits[i - 1] != 0) {
            mean += response(trajectory.samples[i - 1].norm(), j - i, config, eff);
        }
    }
    return mean;
}

double mean_received_outdated(std::span<const std::uint8_t> bits, int j,
                              const PhysicalConfig& config) {
    require_index(bits, j);
    const EffectiveDiffusion eff = derive_effective(config);
    double mean = config.noise_mean;
    for (int i = 1; i <= j; ++i) {
        if (bits[i - 1] != 0) {
            mean += response(config.initial_distance, j - i, config, eff);
        }
    }
    return mean;
}

std::int64_t optimal_threshold(const PoissonSignalModel& model, double p0, double p1) {
    if (!(p1 > 0.0 && p1 < 1.0) || !(p0 > 0.0)) {
        throw std::domain_error("threshold needs priors strictly inside (0, 1)");
    }
    if (!(model.lambda0 > 0.0)) {
        throw std::domain_error("threshold undefined for lambda0 <= 0");
    }
    if (!(model.lambda1 > model.lambda0)) {
        throw DegenerateModelError("threshold undefined for lambda1 <= lambda0");
    }
    const double ratio = std::log(model.lambda1 / model.lambda0);
    if (!(ratio > 0.0)) {
        throw DegenerateModelError("lambda1 / lambda0 rounds to 1");
    }
    const double xi = std::ceil((std::log(p0 / p1) + (model.lambda1 - model.lambda0)) / ratio);
    constexpr double kMax = 1e18;
    if (!(xi > 0.0)) {
        return 0;
    }
    return static_cast<std::int64_t>(std::min(xi, kMax));
}

double poisson_cdf_below(std::int64_t xi, double lambda) {
    if (xi <= 0) {
        return 0.0;
    }
    if (lambda <= 0.0) {
        return 1.0;
    }
    const auto a = static_cast<double>(xi);
    // Beyond ~50 standard deviations the upper tail is below double resolution.
    if (a > lambda + 50.0 * std::sqrt(lambda) + 100.0) {
        return 1.0;
    }
    // Pr(N <= xi - 1) = Q(xi, lambda), the regularised upper incomplete gamma.
    return boost::math::gamma_q(a, lambda);
}

double poisson_tail_from(std::int64_t xi, double lambda) { return 1.0 - poisson_cdf_below(xi, lambda); }

double conditional_error_prob(std::uint8_t bit, double mean, std::int64_t xi) {
    if (!(mean >= 0.0)) {
        throw std::invalid_argument("Poisson mean must be >= 0");
    }
    return bit != 0 ? poisson_cdf_below(xi, mean) : poisson_tail_from(xi, mean);
}

ResponseTable::ResponseTable(const RelativeTrajectory& trajectory, const PhysicalConfig& config)
    : length_(config.sequence_length), frozen_(false) {
    if (trajectory.samples.size() < static_cast<std::size_t>(length_)) {
        throw std::invalid_argument("trajectory shorter than L");
    }
    const EffectiveDiffusion eff = derive_effective(config);
    const auto n = static_cast<std::size_t>(length_);
    values_.resize(n * n);
    for (int i = 1; i <= length_; ++i) {
        const double distance = trajectory.samples[static_cast<std::size_t>(i - 1)].norm();
        for (int lag = 0; lag <= length_ - i; ++lag) {
            values_[static_cast<std::size_t>(i - 1) * n + static_cast<std::size_t>(lag)] =
                response(distance, lag, config, eff);
        }
    }
}

ResponseTable::ResponseTable(const PhysicalConfig& config)
    : length_(config.sequence_length), frozen_(true) {
    const EffectiveDiffusion eff = derive_effective(config);
    values_.resize(static_cast<std::size_t>(length_));
    for (int lag = 0; lag < length_; ++lag) {
        values_[static_cast<std::size_t>(lag)] = response(config.initial_distance, lag, config, eff);
    }
}

double ResponseTable::operator()(int i, int j) const {
    const auto lag = static_cast<std::size_t>(j - i);
    if (frozen_) {
        return values_[lag];
    }
    return values_[static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(length_) + lag];
}

DetectionResult detect_sequence(std::span<const std::int64_t> counts, CsiMode csi,
                                const RelativeTrajectory& trajectory, const PhysicalConfig& config,
                                ThresholdPolicy policy, std::span<const std::uint8_t> true_bits) {
    const ResponseTable table =
        csi == CsiMode::Perfect ? ResponseTable(trajectory, config) : ResponseTable(config);
    return detect_sequence(counts, table, config, policy, true_bits);
}

DetectionResult detect_sequence(std::span<const std::int64_t> counts, const ResponseTable& table,
                                const PhysicalConfig& config, ThresholdPolicy policy,
                                std::span<const std::uint8_t> true_bits) {
    const auto length = static_cast<std::size_t>(config.sequence_length);
    if (counts.size() != length || static_cast<std::size_t>(table.length()) != length) {
        throw std::invalid_argument("expected one count per bit interval");
    }
    if (policy == ThresholdPolicy::GenieBits && true_bits.size() != length) {
        throw std::invalid_argument("genie thresholds need the transmitted bits");
    }
    DetectionResult out;
    out.bits.assign(length, 0);
    out.thresholds.assign(length, 0);
    out.fallback.assign(length, 0);
    const std::span<const std::uint8_t> history =
        policy == ThresholdPolicy::GenieBits ? true_bits : std::span<const std::uint8_t>(out.bits);
    for (int j = 1; j <= config.sequence_length; ++j) {
        double lambda0 = config.noise_mean;
        for (int i = 1; i < j; ++i) {
            if (history[static_cast<std::size_t>(i - 1)] != 0) {
                lambda0 += table(i, j);
            }
        }
        const PoissonSignalModel model{.lambda1 = lambda0 + table(j, j), .lambda0 = lambda0};
        const auto idx = static_cast<std::size_t>(j - 1);
        try {
            const std::int64_t xi = optimal_threshold(model, config.prob_zero(), config.prob_one);
            out.thresholds[idx] = xi;
            out.bits[idx] = decide(counts[idx], xi);
        } catch (const std::domain_error&) {
            const double midpoint = lambda0 + 0.5 * (model.lambda1 - lambda0);
            out.fallback[idx] = 1;
            out.thresholds[idx] = static_cast<std::int64_t>(std::ceil(midpoint));
            out.bits[idx] = static_cast<double>(counts[idx]) >= midpoint ? 1 : 0;
        }
    }
    return out;
}

}  // namespace mcchan
