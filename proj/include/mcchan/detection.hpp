#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "mcchan/brownian.hpp"
#include "mcchan/model.hpp"

// Single-sample threshold detection on Poisson-distributed molecule counts
// with a threshold that adapts per bit interval.

namespace mcchan {

/// Conditional means of the count in one bit interval given b_j = 1 / b_j = 0.
struct PoissonSignalModel {
    double lambda1 = 0.0;
    double lambda0 = 0.0;
};

/// What the detector knows about the channel. Perfect: realised relative
/// distances for every release so far. Outdated: the initial distance only.
enum class CsiMode { Perfect, Outdated };

/// Which previous bits enter the ISI term of the threshold: the detector's own
/// decisions (practical detector) or the transmitted ones (genie-aided).
enum class ThresholdPolicy { EstimatedBits, GenieBits };

/// Expected count at tau_{j,s} = (j - 1) T + tau_s given the realised
/// trajectory; bit i is released at (i - 1) T from distance |r((i - 1) T)|.
/// `j` is 1-based; bits needs at least j entries.
[[nodiscard]] double mean_received_perfect(std::span<const std::uint8_t> bits,
                                           const RelativeTrajectory& trajectory, int j,
                                           const PhysicalConfig& config);

/// Same sum with every release frozen at the initial distance r_0.
[[nodiscard]] double mean_received_outdated(std::span<const std::uint8_t> bits, int j,
                                            const PhysicalConfig& config);

class DegenerateModelError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// ceil((ln(P0/P1) + lambda1 - lambda0) / ln(lambda1/lambda0)), floored at 0.
/// Throws DegenerateModelError when lambda1 <= lambda0 and std::domain_error
/// when lambda0 <= 0 or P1 is outside (0, 1).
[[nodiscard]] std::int64_t optimal_threshold(const PoissonSignalModel& model, double p0, double p1);

/// Pr(N < xi) for N ~ Poisson(lambda).
[[nodiscard]] double poisson_cdf_below(std::int64_t xi, double lambda);

/// Pr(N >= xi), the complement of poisson_cdf_below as computed.
[[nodiscard]] double poisson_tail_from(std::int64_t xi, double lambda);

[[nodiscard]] inline std::uint8_t decide(std::int64_t count, std::int64_t xi) {
    return count >= xi ? 1 : 0;
}

/// Pr(decision != b_j) when the count is Poisson(mean) and the threshold is xi.
[[nodiscard]] double conditional_error_prob(std::uint8_t bit, double mean, std::int64_t xi);

/// Precomputed responses for one trial: response(i, j) is N_A h for the
/// release of bit i observed in interval j (both 1-based, i <= j).
class ResponseTable {
public:
    /// Perfect CSI: distances from `trajectory`.
    ResponseTable(const RelativeTrajectory& trajectory, const PhysicalConfig& config);
    /// Outdated CSI: every release at r_0.
    explicit ResponseTable(const PhysicalConfig& config);

    [[nodiscard]] double operator()(int i, int j) const;
    [[nodiscard]] int length() const noexcept { return length_; }

private:
    int length_;
    bool frozen_;
    std::vector<double> values_;  // row-major [i-1][j-i]; frozen tables keep one row
};

struct DetectionResult {
    BitSequence bits;
    std::vector<std::int64_t> thresholds;
    // Intervals where the threshold was degenerate and the midpoint rule
    // count >= lambda0 + (lambda1 - lambda0) / 2 decided instead.
    std::vector<std::uint8_t> fallback;
};

/// Sequential detection of counts[0..L-1] taken at tau_{j,s}. With
/// ThresholdPolicy::GenieBits, `true_bits` supplies the ISI term.
[[nodiscard]] DetectionResult detect_sequence(std::span<const std::int64_t> counts, CsiMode csi,
                                              const RelativeTrajectory& trajectory,
                                              const PhysicalConfig& config,
                                              ThresholdPolicy policy = ThresholdPolicy::EstimatedBits,
                                              std::span<const std::uint8_t> true_bits = {});

/// Same detector on a prebuilt response table (the table fixes the CSI mode).
[[nodiscard]] DetectionResult detect_sequence(std::span<const std::int64_t> counts,
                                              const ResponseTable& table,
                                              const PhysicalConfig& config,
                                              ThresholdPolicy policy = ThresholdPolicy::EstimatedBits,
                                              std::span<const std::uint8_t> true_bits = {});

}  // namespace mcchan
