#pragma once

#include <cstdint>

#include "mcchan/model.hpp"

// Reference evaluations that share no code with the closed forms: adaptive
// Gauss-Kronrod quadrature over the defining expectations, and
// 50-digit Poisson sums. Slow; used by the test suites and `mcchan validate`.

namespace mcchan::oracle {

/// log of  int_{R^3} h(|r|, tau) f_{r(t)}(r) dr  by per-axis quadrature.
[[nodiscard]] double log_mean_cir(double t, double tau, double x0, const EffectiveDiffusion& eff);

/// log of  int_{R^3} h(|r|, tau)^2 f_{r(t)}(r) dr  by per-axis quadrature.
[[nodiscard]] double log_acf_equal(double t, double tau, double x0, const EffectiveDiffusion& eff);

/// log of the six-dimensional expectation E{h(t1) h(t2)} under the Markov
/// factorisation f(r1) f(r2 | r1). The integrand factorises over Cartesian
/// axes, so it is evaluated as a product of three nested 2-D quadratures.
[[nodiscard]] double log_acf(double t1, double t2, double tau, double x0,
                             const EffectiveDiffusion& eff);

/// Pr(N < xi), N ~ Poisson(lambda), by direct 50-digit summation.
[[nodiscard]] double poisson_cdf_below(std::int64_t xi, double lambda);

/// argmin over xi in [0, xi_max] of p0 Pr(N >= xi | lambda0) + p1 Pr(N < xi | lambda1);
/// the smallest minimiser wins ties.
[[nodiscard]] std::int64_t brute_force_threshold(double lambda0, double lambda1, double p0,
                                                 double p1, std::int64_t xi_max);

}  // namespace mcchan::oracle
