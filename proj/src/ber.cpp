#include "mcchan/ber.hpp"

#include <cmath>
#include <stdexcept>

#include "mcchan/brownian.hpp"
#include "mcchan/rng.hpp"

namespace mcchan {

namespace {

void require_run(const PhysicalConfig& config, std::int64_t trials) {
    validate(config);
    if (trials < 1) {
        throw std::invalid_argument("trials must be >= 1");
    }
}

void require_interval(int j, const PhysicalConfig& config) {
    if (j < 1 || j > config.sequence_length) {
        throw std::out_of_range("bit index j must lie in [1, L]");
    }
}

BitSequence draw_bits(const PhysicalConfig& config, BitSource source, std::uint64_t seed,
                      std::uint64_t trial) {
    BitSequence bits(static_cast<std::size_t>(config.sequence_length), 0);
    switch (source) {
        case BitSource::AllZero:
            break;
        case BitSource::AllOne:
            std::fill(bits.begin(), bits.end(), 1);
            break;
        case BitSource::Random: {
            RngStream rng(seed, trial, StreamTag::Bits);
            for (auto& b : bits) {
                b = rng.bernoulli(config.prob_one) ? 1 : 0;
            }
            break;
        }
    }
    return bits;
}

// Threshold for interval j from a response table and a bit history, with the
// midpoint fallback for degenerate models.
std::int64_t threshold_for(int j, const ResponseTable& table, std::span<const std::uint8_t> history,
                           const PhysicalConfig& config) {
    double lambda0 = config.noise_mean;
    for (int i = 1; i < j; ++i) {
        if (history[static_cast<std::size_t>(i - 1)] != 0) {
            lambda0 += table(i, j);
        }
    }
    const PoissonSignalModel model{.lambda1 = lambda0 + table(j, j), .lambda0 = lambda0};
    try {
        return optimal_threshold(model, config.prob_zero(), config.prob_one);
    } catch (const std::domain_error&) {
        return static_cast<std::int64_t>(std::ceil(lambda0 + 0.5 * (model.lambda1 - lambda0)));
    }
}

struct TrialErrors {
    std::vector<std::uint8_t> perfect;
    std::vector<std::uint8_t> outdated;
};

TrialErrors decode_both(std::span<const std::int64_t> counts, const RelativeTrajectory& trajectory,
                        const BitSequence& bits, const ResponseTable& outdated_table,
                        const PhysicalConfig& config, ThresholdPolicy policy) {
    const ResponseTable perfect_table(trajectory, config);
    const DetectionResult p = detect_sequence(counts, perfect_table, config, policy, bits);
    const DetectionResult o = detect_sequence(counts, outdated_table, config, policy, bits);
    TrialErrors e;
    e.perfect.resize(bits.size());
    e.outdated.resize(bits.size());
    for (std::size_t k = 0; k < bits.size(); ++k) {
        e.perfect[k] = p.bits[k] != bits[k] ? 1 : 0;
        e.outdated[k] = o.bits[k] != bits[k] ? 1 : 0;
    }
    return e;
}

// Poisson-model counts for one trial: means from the realised trajectory.
std::vector<std::int64_t> draw_counts(const ResponseTable& truth, const BitSequence& bits,
                                      const PhysicalConfig& config, std::uint64_t seed,
                                      std::uint64_t trial) {
    RngStream rng(seed, trial, StreamTag::Counts);
    std::vector<std::int64_t> counts(bits.size());
    for (int j = 1; j <= config.sequence_length; ++j) {
        double mean = config.noise_mean;
        for (int i = 1; i <= j; ++i) {
            if (bits[static_cast<std::size_t>(i - 1)] != 0) {
                mean += truth(i, j);
            }
        }
        counts[static_cast<std::size_t>(j - 1)] = rng.poisson(mean);
    }
    return counts;
}

std::vector<TrialErrors> run_poisson_trials(const PhysicalConfig& config, std::int64_t trials,
                                            std::uint64_t seed, const BerOptions& options) {
    const ResponseTable outdated_table(config);
    std::vector<TrialErrors> results(static_cast<std::size_t>(trials));
    parallel_for(results.size(), [&](std::size_t k) {
        RngStream traj_rng(seed, k, StreamTag::Trajectory);
        const RelativeTrajectory trajectory = sample_relative_trajectory(config, traj_rng);
        const BitSequence bits = draw_bits(config, options.source, seed, k);
        const ResponseTable truth(trajectory, config);
        const std::vector<std::int64_t> counts = draw_counts(truth, bits, config, seed, k);
        results[k] = decode_both(counts, trajectory, bits, outdated_table, config, options.policy);
    });
    return results;
}

BerCurve summarise(const std::vector<TrialErrors>& results, const PhysicalConfig& config) {
    BerCurve curve;
    const auto length = static_cast<std::size_t>(config.sequence_length);
    std::vector<double> p(results.size());
    std::vector<double> o(results.size());
    CompensatedSum sum_p;
    CompensatedSum sum_o;
    for (std::size_t k = 0; k < length; ++k) {
        for (std::size_t t = 0; t < results.size(); ++t) {
            p[t] = results[t].perfect[k];
            o[t] = results[t].outdated[k];
        }
        const Estimate ep = estimate(p);
        const Estimate eo = estimate(o);
        curve.records.push_back(BerRecord{
            .j = static_cast<int>(k + 1),
            .pe_perfect = ep.mean,
            .pe_outdated = eo.mean,
            .gap = std::abs(eo.mean - ep.mean),
            .stderr_perfect = ep.std_error,
            .stderr_outdated = eo.std_error,
            .trials = static_cast<std::int64_t>(results.size()),
        });
        sum_p.add(ep.mean);
        sum_o.add(eo.mean);
    }
    curve.mean_perfect = sum_p.value() / static_cast<double>(length);
    curve.mean_outdated = sum_o.value() / static_cast<double>(length);
    return curve;
}

}  // namespace

Estimate expected_error_semianalytic(int j, const PhysicalConfig& config, CsiMode csi,
                                     std::int64_t trials, std::uint64_t seed) {
    require_run(config, trials);
    require_interval(j, config);
    const ResponseTable outdated_table(config);
    const double p1 = config.prob_one;
    std::vector<double> values(static_cast<std::size_t>(trials));
    parallel_for(values.size(), [&](std::size_t k) {
        RngStream traj_rng(seed, k, StreamTag::Trajectory);
        const RelativeTrajectory trajectory = sample_relative_trajectory(config, traj_rng);
        const BitSequence bits = draw_bits(config, BitSource::Random, seed, k);
        const ResponseTable truth(trajectory, config);
        const ResponseTable& known = csi == CsiMode::Perfect ? truth : outdated_table;
        const std::int64_t xi = threshold_for(j, known, bits, config);

        double mean0 = config.noise_mean;
        for (int i = 1; i < j; ++i) {
            if (bits[static_cast<std::size_t>(i - 1)] != 0) {
                mean0 += truth(i, j);
            }
        }
        const double mean1 = mean0 + truth(j, j);
        values[k] = (1.0 - p1) * conditional_error_prob(0, mean0, xi) +
                    p1 * conditional_error_prob(1, mean1, xi);
    });
    return estimate(values);
}

Estimate expected_error_empirical(int j, const PhysicalConfig& config, CsiMode csi,
                                  std::int64_t trials, std::uint64_t seed,
                                  const BerOptions& options) {
    require_run(config, trials);
    require_interval(j, config);
    const std::vector<TrialErrors> results = run_poisson_trials(config, trials, seed, options);
    std::vector<double> errors(results.size());
    for (std::size_t t = 0; t < results.size(); ++t) {
        const auto& e = csi == CsiMode::Perfect ? results[t].perfect : results[t].outdated;
        errors[t] = e[static_cast<std::size_t>(j - 1)];
    }
    return estimate(errors);
}

BerCurve ber_curve(const PhysicalConfig& config, std::int64_t trials, std::uint64_t seed,
                   const BerOptions& options) {
    require_run(config, trials);
    return summarise(run_poisson_trials(config, trials, seed, options), config);
}

BerCurve ber_curve_particle(const PhysicalConfig& config, std::int64_t trials,
                            std::uint64_t seed) {
    require_run(config, trials);
    const ResponseTable outdated_table(config);
    std::vector<TrialErrors> results(static_cast<std::size_t>(trials));
    parallel_for(results.size(), [&](std::size_t k) {
        const BitSequence bits = draw_bits(config, BitSource::Random, seed, k);
        RngStream rng(seed, k, StreamTag::Molecules);
        const ObservationSeries series = simulate_transmission(config, bits, rng);
        results[k] = decode_both(series.counts, series.trajectory, bits, outdated_table, config,
                                 ThresholdPolicy::EstimatedBits);
    });
    return summarise(results, config);
}

}  // namespace mcchan
