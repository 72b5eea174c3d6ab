#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mcchan/model.hpp"
#include "mcchan/parallel.hpp"
#include "mcchan/rng.hpp"

// Particle-based Brownian-motion simulation of the mobile link. The
// transmitter, the receiver and every released molecule perform independent
// 3-D random walks; the receiver is a transparent sphere that counts the
// molecules inside it without removing them.

namespace mcchan {

struct ObservationSeries {
    std::vector<double> times;         // observation instants (s)
    std::vector<std::int64_t> counts;  // molecules inside the receiver at each instant
    // Relative Tx-Rx positions at the start of each bit interval, filled by
    // simulate_transmission.
    RelativeTrajectory trajectory;
};

/// pos + Normal(0, 2 D dt) in each coordinate.
[[nodiscard]] Vec3 gaussian_step(const Vec3& pos, double diffusion, double dt, RngStream& rng);

/// r(kT), k = 0..L-1, sampled exactly at bit-interval resolution.
[[nodiscard]] RelativeTrajectory sample_relative_trajectory(const PhysicalConfig& config,
                                                            RngStream& rng);

/// Releases N_A molecules at the transmitter centre at `release_time` and
/// counts them inside the receiver at each offset after release. Everything
/// advances in steps of dt; release_time and offsets must be multiples of dt.
/// `times` in the result holds the offsets.
[[nodiscard]] ObservationSeries simulate_impulse(const PhysicalConfig& config, double release_time,
                                                 std::span<const double> offsets, RngStream& rng);

/// simulate_impulse with the single offset tau_s.
[[nodiscard]] ObservationSeries simulate_impulse(const PhysicalConfig& config, double release_time,
                                                 RngStream& rng);

/// ON/OFF keyed transmission of `bits` (size L). Counts are taken at
/// (j - 1) T + tau_s and include an independent Poisson(n_A) background
/// draw per observation.
[[nodiscard]] ObservationSeries simulate_transmission(const PhysicalConfig& config,
                                                      const BitSequence& bits, RngStream& rng);

/// Average of counts / N_A at offset tau after a release at `release_time`,
/// over `trials` realisations (trial k uses stream (seed, k)).
[[nodiscard]] Estimate estimate_impulse(const PhysicalConfig& config, double release_time,
                                        double tau, std::int64_t trials);

/// Monte-Carlo E{h(t1, tau) h(t2, tau)}: relative positions are sampled at t1
/// and t2 and the conditional response is evaluated in closed form.
[[nodiscard]] Estimate empirical_acf(const PhysicalConfig& config, double t1, double t2,
                                     double tau, std::int64_t trials);

}  // namespace mcchan
