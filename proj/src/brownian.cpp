#include "mcchan/brownian.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "mcchan/analytic.hpp"

namespace mcchan {

namespace {

Vec3 gaussian_vector(double sd, RngStream& rng) {
    const double x = rng.normal();
    const double y = rng.normal();
    const double z = rng.normal();
    return {sd * x, sd * y, sd * z};
}

std::int64_t steps_for(double duration, double dt, const char* what) {
    if (!(duration >= 0.0) || !is_step_multiple(duration, dt)) {
        throw std::invalid_argument(std::string(what) + " must be a non-negative multiple of dt");
    }
    return step_count(duration, dt);
}

std::int64_t count_inside(std::span<const Vec3> molecules, const Vec3& centre, double radius2) {
    std::int64_t inside = 0;
    for (const Vec3& m : molecules) {
        inside += (m - centre).norm2() <= radius2 ? 1 : 0;
    }
    return inside;
}

}  // namespace

Vec3 gaussian_step(const Vec3& pos, double diffusion, double dt, RngStream& rng) {
    if (diffusion == 0.0) {
        return pos;
    }
    return pos + gaussian_vector(std::sqrt(2.0 * diffusion * dt), rng);
}

RelativeTrajectory sample_relative_trajectory(const PhysicalConfig& config, RngStream& rng) {
    validate(config);
    const double d2 = config.diffusion_rx + config.diffusion_tx;
    RelativeTrajectory traj;
    traj.step = config.bit_interval;
    traj.samples.reserve(static_cast<std::size_t>(config.sequence_length));
    Vec3 r{config.initial_distance, 0.0, 0.0};
    traj.samples.push_back(r);
    for (int k = 1; k < config.sequence_length; ++k) {
        // Free-diffusion increments are exactly Gaussian over any horizon.
        r = gaussian_step(r, d2, config.bit_interval, rng);
        traj.samples.push_back(r);
    }
    return traj;
}

ObservationSeries simulate_impulse(const PhysicalConfig& config, double release_time,
                                   std::span<const double> offsets, RngStream& rng) {
    validate(config);
    const double dt = config.time_step;
    const std::int64_t release_steps = steps_for(release_time, dt, "release time");
    std::vector<std::int64_t> observe_steps;
    observe_steps.reserve(offsets.size());
    for (double off : offsets) {
        observe_steps.push_back(steps_for(off, dt, "observation offset"));
    }

    Vec3 tx{};
    Vec3 rx{config.initial_distance, 0.0, 0.0};
    for (std::int64_t k = 0; k < release_steps; ++k) {
        tx = gaussian_step(tx, config.diffusion_tx, dt, rng);
        rx = gaussian_step(rx, config.diffusion_rx, dt, rng);
    }

    ObservationSeries series;
    series.times.assign(offsets.begin(), offsets.end());
    series.counts.assign(offsets.size(), 0);
    if (config.molecules_per_bit == 0 || offsets.empty()) {
        return series;
    }

    std::vector<Vec3> molecules(static_cast<std::size_t>(config.molecules_per_bit), tx);
    const double radius2 = config.receiver_radius * config.receiver_radius;
    const double mol_sd = std::sqrt(2.0 * config.diffusion_molecule * dt);
    const std::int64_t last = *std::max_element(observe_steps.begin(), observe_steps.end());

    auto record = [&](std::int64_t step) {
        for (std::size_t i = 0; i < observe_steps.size(); ++i) {
            if (observe_steps[i] == step) {
                series.counts[i] = count_inside(molecules, rx, radius2);
            }
        }
    };
    record(0);
    for (std::int64_t k = 1; k <= last; ++k) {
        tx = gaussian_step(tx, config.diffusion_tx, dt, rng);
        rx = gaussian_step(rx, config.diffusion_rx, dt, rng);
        for (Vec3& m : molecules) {
            m += gaussian_vector(mol_sd, rng);
        }
        record(k);
    }
    return series;
}

ObservationSeries simulate_impulse(const PhysicalConfig& config, double release_time,
                                   RngStream& rng) {
    const std::array<double, 1> offsets{config.sampling_offset};
    return simulate_impulse(config, release_time, offsets, rng);
}

ObservationSeries simulate_transmission(const PhysicalConfig& config, const BitSequence& bits,
                                        RngStream& rng) {
    validate(config);
    if (bits.size() != static_cast<std::size_t>(config.sequence_length)) {
        throw std::invalid_argument("bit sequence length must equal L");
    }
    const double dt = config.time_step;
    const std::int64_t per_bit = step_count(config.bit_interval, dt);
    const std::int64_t offset = step_count(config.sampling_offset, dt);
    const auto length = static_cast<std::int64_t>(bits.size());
    const std::int64_t total = (length - 1) * per_bit + offset;
    const double radius2 = config.receiver_radius * config.receiver_radius;

    // Tx and Rx walk in steps of dt. Molecule clouds only matter at
    // observation instants, so each cloud jumps straight from one instant to
    // the next with the exact Gaussian increment for the elapsed time.
    struct Cloud {
        std::vector<Vec3> positions;
        double updated_at;
    };
    std::vector<Cloud> clouds;

    ObservationSeries series;
    series.trajectory.step = config.bit_interval;
    series.times.reserve(bits.size());
    series.counts.reserve(bits.size());
    series.trajectory.samples.reserve(bits.size());

    Vec3 tx{};
    Vec3 rx{config.initial_distance, 0.0, 0.0};
    for (std::int64_t k = 0; k <= total; ++k) {
        const double now = static_cast<double>(k) * dt;
        if (k % per_bit == 0 && k / per_bit < length) {
            const auto j = static_cast<std::size_t>(k / per_bit);
            series.trajectory.samples.push_back(rx - tx);
            if (bits[j] != 0 && config.molecules_per_bit > 0) {
                clouds.push_back(Cloud{
                    std::vector<Vec3>(static_cast<std::size_t>(config.molecules_per_bit), tx), now});
            }
        }
        if (k >= offset && (k - offset) % per_bit == 0) {
            std::int64_t inside = 0;
            for (Cloud& cloud : clouds) {
                const double sd =
                    std::sqrt(2.0 * config.diffusion_molecule * (now - cloud.updated_at));
                for (Vec3& m : cloud.positions) {
                    m += gaussian_vector(sd, rng);
                }
                cloud.updated_at = now;
                inside += count_inside(cloud.positions, rx, radius2);
            }
            inside += rng.poisson(config.noise_mean);
            series.times.push_back(now);
            series.counts.push_back(inside);
        }
        tx = gaussian_step(tx, config.diffusion_tx, dt, rng);
        rx = gaussian_step(rx, config.diffusion_rx, dt, rng);
    }
    return series;
}

Estimate estimate_impulse(const PhysicalConfig& config, double release_time, double tau,
                          std::int64_t trials) {
    validate(config);
    if (trials < 1) {
        throw std::invalid_argument("trials must be >= 1");
    }
    if (config.molecules_per_bit == 0) {
        throw std::invalid_argument("N_A must be > 0 to estimate the impulse response");
    }
    const std::array<double, 1> offsets{tau};
    const double n_a = static_cast<double>(config.molecules_per_bit);
    std::vector<double> fractions(static_cast<std::size_t>(trials));
    parallel_for(fractions.size(), [&](std::size_t i) {
        RngStream rng(config.seed, i, StreamTag::Impulse);
        const ObservationSeries s = simulate_impulse(config, release_time, offsets, rng);
        fractions[i] = static_cast<double>(s.counts[0]) / n_a;
    });
    return estimate(fractions);
}

Estimate empirical_acf(const PhysicalConfig& config, double t1, double t2, double tau,
                       std::int64_t trials) {
    if (!(t1 >= 0.0) || t2 < t1) {
        throw std::invalid_argument("empirical_acf requires 0 <= t1 <= t2");
    }
    if (trials < 1) {
        throw std::invalid_argument("trials must be >= 1");
    }
    const EffectiveDiffusion eff = derive_effective(config);
    const Vec3 r0{config.initial_distance, 0.0, 0.0};
    std::vector<double> products(static_cast<std::size_t>(trials));
    parallel_for(products.size(), [&](std::size_t i) {
        RngStream rng(config.seed, i, StreamTag::Acf);
        const Vec3 r1 = gaussian_step(r0, eff.d2, t1, rng);
        const Vec3 r2 = t2 > t1 ? gaussian_step(r1, eff.d2, t2 - t1, rng) : r1;
        products[i] = cir_conditional(r1.norm(), tau, eff) * cir_conditional(r2.norm(), tau, eff);
    });
    return estimate(products);
}

}  // namespace mcchan
