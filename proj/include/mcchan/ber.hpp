#pragma once

#include <cstdint>
#include <vector>

#include "mcchan/detection.hpp"
#include "mcchan/model.hpp"
#include "mcchan/parallel.hpp"

// Monte-Carlo evaluation of the expected per-interval error probability of
// the adaptive-threshold detector under perfect and outdated CSI.
//
// Every trial k draws from three sub-streams of (seed, k): the relative
// trajectory, the transmitted bits and the Poisson counts. Both CSI modes
// decode the same counts, so their difference is estimated with common
// random numbers.

namespace mcchan {

struct BerRecord {
    int j = 0;
    double pe_perfect = 0.0;
    double pe_outdated = 0.0;
    double gap = 0.0;  // |pe_outdated - pe_perfect|
    double stderr_perfect = 0.0;
    double stderr_outdated = 0.0;
    std::int64_t trials = 0;
};

enum class BitSource { Random, AllZero, AllOne };

struct BerOptions {
    ThresholdPolicy policy = ThresholdPolicy::EstimatedBits;
    BitSource source = BitSource::Random;
};

/// Conditional error probability averaged over trajectories and previous
/// bits, with the current bit averaged out analytically. Thresholds use the
/// transmitted previous bits so the Poisson error expression applies in
/// closed form per realisation.
[[nodiscard]] Estimate expected_error_semianalytic(int j, const PhysicalConfig& config, CsiMode csi,
                                                   std::int64_t trials, std::uint64_t seed);

/// Fraction of trials in which interval j is decoded wrongly, with counts
/// drawn from the Poisson model and the full sequential detector.
[[nodiscard]] Estimate expected_error_empirical(int j, const PhysicalConfig& config, CsiMode csi,
                                                std::int64_t trials, std::uint64_t seed,
                                                const BerOptions& options = {});

struct BerCurve {
    std::vector<BerRecord> records;  // j = 1..L
    double mean_perfect = 0.0;       // (1/L) sum_j pe_perfect
    double mean_outdated = 0.0;
};

/// Empirical error curve for both CSI modes over j = 1..L.
[[nodiscard]] BerCurve ber_curve(const PhysicalConfig& config, std::int64_t trials,
                                 std::uint64_t seed, const BerOptions& options = {});

/// Same curve with counts taken from the particle simulation instead of the
/// Poisson model. Costly; meant for reduced configurations.
[[nodiscard]] BerCurve ber_curve_particle(const PhysicalConfig& config, std::int64_t trials,
                                          std::uint64_t seed);

}  // namespace mcchan
