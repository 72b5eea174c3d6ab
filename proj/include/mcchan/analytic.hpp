#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "mcchan/model.hpp"

// Closed-form statistics of the time-variant impulse response h(t, tau): the
// probability that a molecule released at time t is inside the receiver tau
// seconds later, where the Tx-Rx distance r(t) diffuses with coefficient D2.
//
// Log-space variants (log_*) are provided wherever the linear value may
// underflow; the linear functions exponentiate them once.

namespace mcchan {

/// Shorthand coefficients for a fixed observation delay tau.
struct Notation {
    double phi_coef = 0.0; // V_obs / (4 pi D1 tau)^{3/2}
    double alpha = 0.0;    // 1 / (4 D1 tau)
    double d2 = 0.0;

    [[nodiscard]] double lambda_of(double t) const;  // (4 pi D2 t)^{-3/2}
    [[nodiscard]] double beta_of(double t) const;    // 1 / (4 D2 t)
};

[[nodiscard]] Notation make_notation(double tau, const EffectiveDiffusion& eff);

/// Impulse response for a known Tx-Rx distance: V/(4 pi D1 tau)^{3/2} exp(-r^2/(4 D1 tau)).
/// Throws std::domain_error for tau <= 0 or D1 == 0. Values above 1 are not
/// clamped; see cir_exceeds_unity.
[[nodiscard]] double cir_conditional(double distance, double tau, const EffectiveDiffusion& eff);
[[nodiscard]] double log_cir_conditional(double distance, double tau, const EffectiveDiffusion& eff);

/// Model-validity flag: the point-observer formula stops being a probability
/// when the receiver is large compared to the diffusion length.
[[nodiscard]] bool cir_exceeds_unity(double distance, double tau, const EffectiveDiffusion& eff);

/// Density of r(t) given r(0) = r0. Throws std::domain_error for t <= 0 or D2 == 0.
[[nodiscard]] double displacement_pdf(const Vec3& r, double t, const Vec3& r0,
                                      const EffectiveDiffusion& eff);

/// m(t) = E{h(t, tau)} with r(0) = [x0, 0, 0].
[[nodiscard]] double mean_cir(double t, double tau, double x0, const EffectiveDiffusion& eff);
[[nodiscard]] double log_mean_cir(double t, double tau, double x0, const EffectiveDiffusion& eff);

/// phi(t1, t2) = E{h(t1, tau) h(t2, tau)} for 0 <= t1 <= t2. Throws
/// std::invalid_argument when t2 < t1.
[[nodiscard]] double acf(double t1, double t2, double tau, double x0, const EffectiveDiffusion& eff);
[[nodiscard]] double log_acf(double t1, double t2, double tau, double x0,
                             const EffectiveDiffusion& eff);

/// phi(t, t) = E{h(t, tau)^2}.
[[nodiscard]] double acf_equal(double t, double tau, double x0, const EffectiveDiffusion& eff);
[[nodiscard]] double log_acf_equal(double t, double tau, double x0, const EffectiveDiffusion& eff);

/// Raised when a computed variance is negative beyond rounding.
class ConsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// sigma^2(t) = phi(t, t) - m(t)^2. Negative values within 1e-15 relative to
/// phi(t, t) are clamped to zero; larger ones throw ConsistencyError.
[[nodiscard]] double variance(double t, double tau, double x0, const EffectiveDiffusion& eff);

/// rho(t1, t2) = phi(t1, t2) / sqrt(phi(t1, t1) phi(t2, t2)); exactly 1 when t1 == t2.
[[nodiscard]] double normalized_acf(double t1, double t2, double tau, double x0,
                                    const EffectiveDiffusion& eff);

/// Raised when rho(0, t) never drops below eta on (0, t_max].
class HorizonError : public std::runtime_error {
public:
    HorizonError(double rho_at_horizon, double t_max);
    [[nodiscard]] double rho_at_horizon() const noexcept { return rho_; }

private:
    double rho_;
};

struct CoherenceResult {
    double time = 0.0;
    // Set when rho(0, .) rose somewhere on the scan grid before the crossing.
    bool non_monotone = false;
};

/// Smallest t2 in (0, t_max] with rho(0, t2) < eta: forward scan with step
/// t_max / 1000, then bisection of the first bracketing cell to 0.1% relative.
[[nodiscard]] CoherenceResult coherence_time(double eta, double tau, double x0,
                                             const EffectiveDiffusion& eff, double t_max);

struct ChannelStats {
    std::vector<double> t;
    std::vector<double> mean;      // m(t)
    std::vector<double> phi_diag;  // phi(t, t)
    std::vector<double> sigma2;    // sigma^2(t)
    std::optional<double> coherence_time;
};

/// Evaluates m, phi(t,t), sigma^2 over `grid`; adds T^c when `eta` is given
/// (t_max = 100 T is the caller's usual horizon).
[[nodiscard]] ChannelStats channel_stats(const std::vector<double>& grid, double tau, double x0,
                                         const EffectiveDiffusion& eff,
                                         std::optional<double> eta = std::nullopt,
                                         double t_max = 0.0);

namespace detail {
// General two-time branch with a configurable sign on the exponent; used by
// the validation suite's mutation check.
[[nodiscard]] double log_acf_general(double t1, double t2, double tau, double x0,
                                     const EffectiveDiffusion& eff, double kappa_sign);
}  // namespace detail

}  // namespace mcchan
