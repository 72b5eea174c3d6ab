#include "mcchan/analytic.hpp"

#include <cmath>
#include <string>

namespace mcchan {

namespace {

void require_tau(double tau, const EffectiveDiffusion& eff) {
    if (!(tau > 0.0)) {
        throw std::domain_error("observation delay tau must be > 0");
    }
    if (!(eff.d1 > 0.0)) {
        throw std::domain_error("D1 must be > 0 (point-source response is singular)");
    }
}

void require_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw std::invalid_argument("release time must be finite and >= 0");
    }
}

}  // namespace

double Notation::lambda_of(double t) const { return std::pow(4.0 * kPi * d2 * t, -1.5); }

double Notation::beta_of(double t) const { return 1.0 / (4.0 * d2 * t); }

Notation make_notation(double tau, const EffectiveDiffusion& eff) {
    require_tau(tau, eff);
    return Notation{
        .phi_coef = eff.volume / std::pow(4.0 * kPi * eff.d1 * tau, 1.5),
        .alpha = 1.0 / (4.0 * eff.d1 * tau),
        .d2 = eff.d2,
    };
}

double log_cir_conditional(double distance, double tau, const EffectiveDiffusion& eff) {
    require_tau(tau, eff);
    const double spread = 4.0 * eff.d1 * tau;
    return std::log(eff.volume) - 1.5 * std::log(kPi * spread) - distance * distance / spread;
}

double cir_conditional(double distance, double tau, const EffectiveDiffusion& eff) {
    return std::exp(log_cir_conditional(distance, tau, eff));
}

bool cir_exceeds_unity(double distance, double tau, const EffectiveDiffusion& eff) {
    return log_cir_conditional(distance, tau, eff) > 0.0;
}

double displacement_pdf(const Vec3& r, double t, const Vec3& r0, const EffectiveDiffusion& eff) {
    if (!(t > 0.0) || !(eff.d2 > 0.0)) {
        throw std::domain_error("displacement density needs t > 0 and D2 > 0");
    }
    const double spread = 4.0 * eff.d2 * t;
    return std::exp(-1.5 * std::log(kPi * spread) - (r - r0).norm2() / spread);
}

double log_mean_cir(double t, double tau, double x0, const EffectiveDiffusion& eff) {
    require_tau(tau, eff);
    require_time(t);
    // The displacement variance adds to the molecule spread.
    const double spread = 4.0 * (eff.d1 * tau + eff.d2 * t);
    return std::log(eff.volume) - 1.5 * std::log(kPi * spread) - x0 * x0 / spread;
}

double mean_cir(double t, double tau, double x0, const EffectiveDiffusion& eff) {
    return std::exp(log_mean_cir(t, tau, x0, eff));
}

double log_acf_equal(double t, double tau, double x0, const EffectiveDiffusion& eff) {
    require_tau(tau, eff);
    require_time(t);
    const double s1 = eff.d1 * tau;
    const double s2 = eff.d1 * tau + 2.0 * eff.d2 * t;
    return 2.0 * std::log(eff.volume) - 1.5 * std::log(4.0 * kPi * s1) -
           1.5 * std::log(4.0 * kPi * s2) - x0 * x0 / (2.0 * s2);
}

double acf_equal(double t, double tau, double x0, const EffectiveDiffusion& eff) {
    return std::exp(log_acf_equal(t, tau, x0, eff));
}

namespace detail {

// With alpha = 1/(4 D1 tau), b1 = 1/(4 D2 t1), bd = 1/(4 D2 (t2 - t1)) and
//   den = (alpha + b1)(alpha + bd) + alpha bd,
// the two-time moment is
//   phi = (2 pi)^3 phi_coef^2 lambda(t1) lambda(t2 - t1) exp(kappa) / (4 den)^{3/2},
//   kappa = -alpha b1 (alpha + 2 bd) x0^2 / den.
// Multiplying den by (4 D2 t1)(4 D2 (t2 - t1)) removes the 1/t singularities:
// with s = 4 D2 t1, u = 4 D2 (t2 - t1) and H = (1 + alpha s)(1 + alpha u) + alpha s,
//   phi = phi_coef^2 H^{-3/2} exp(-alpha x0^2 (2 + alpha u) / H),
// which stays finite as t1 -> 0, t2 -> t1 and D2 -> 0.
double log_acf_general(double t1, double t2, double tau, double x0, const EffectiveDiffusion& eff,
                       double kappa_sign) {
    const Notation n = make_notation(tau, eff);
    const double s = 4.0 * eff.d2 * t1;
    const double u = 4.0 * eff.d2 * (t2 - t1);
    const double as = n.alpha * s;
    const double au = n.alpha * u;
    const double h = (1.0 + as) * (1.0 + au) + as;
    const double kappa = -n.alpha * x0 * x0 * (2.0 + au) / h;
    return 2.0 * std::log(n.phi_coef) - 1.5 * std::log(h) + kappa_sign * kappa;
}

}  // namespace detail

double log_acf(double t1, double t2, double tau, double x0, const EffectiveDiffusion& eff) {
    require_tau(tau, eff);
    require_time(t1);
    require_time(t2);
    if (t2 < t1) {
        throw std::invalid_argument("acf requires t1 <= t2");
    }
    if (t2 == t1) {
        return log_acf_equal(t1, tau, x0, eff);
    }
    if (t1 == 0.0) {
        // r(0) is deterministic, so the expectation factorises.
        return log_cir_conditional(x0, tau, eff) + log_mean_cir(t2, tau, x0, eff);
    }
    return detail::log_acf_general(t1, t2, tau, x0, eff, 1.0);
}

double acf(double t1, double t2, double tau, double x0, const EffectiveDiffusion& eff) {
    return std::exp(log_acf(t1, t2, tau, x0, eff));
}

double variance(double t, double tau, double x0, const EffectiveDiffusion& eff) {
    const double log_second = log_acf_equal(t, tau, x0, eff);
    if (t == 0.0 || eff.d2 == 0.0) {
        return 0.0;
    }
    const double second = std::exp(log_second);
    // phi (1 - m^2 / phi) keeps relative accuracy when sigma^2 << m^2.
    const double v = -second * std::expm1(2.0 * log_mean_cir(t, tau, x0, eff) - log_second);
    if (v >= 0.0) {
        return v;
    }
    if (-v <= 1e-15 * second) {
        return 0.0;
    }
    throw ConsistencyError("negative variance " + std::to_string(v) + " at t = " +
                           std::to_string(t));
}

double normalized_acf(double t1, double t2, double tau, double x0, const EffectiveDiffusion& eff) {
    if (t1 == t2) {
        require_tau(tau, eff);
        require_time(t1);
        return 1.0;
    }
    const double lnum = log_acf(t1, t2, tau, x0, eff);
    const double lden = 0.5 * (log_acf_equal(t1, tau, x0, eff) + log_acf_equal(t2, tau, x0, eff));
    if (!std::isfinite(lden)) {
        throw std::domain_error("normalized acf: zero second moment");
    }
    return std::exp(lnum - lden);
}

HorizonError::HorizonError(double rho_at_horizon, double t_max)
    : std::runtime_error("coherence not reached within horizon t_max = " + std::to_string(t_max) +
                         " s (rho = " + std::to_string(rho_at_horizon) + ")"),
      rho_(rho_at_horizon) {}

CoherenceResult coherence_time(double eta, double tau, double x0, const EffectiveDiffusion& eff,
                               double t_max) {
    if (!(eta > 0.0 && eta < 1.0)) {
        throw std::invalid_argument("eta must lie in (0, 1)");
    }
    if (!(t_max > 0.0) || !std::isfinite(t_max)) {
        throw std::invalid_argument("t_max must be finite and > 0");
    }
    auto rho = [&](double t2) { return normalized_acf(0.0, t2, tau, x0, eff); };

    constexpr int kScanPoints = 1000;
    const double step = t_max / kScanPoints;
    CoherenceResult result;
    double prev_t = 0.0;
    double prev_rho = 1.0;
    for (int k = 1; k <= kScanPoints; ++k) {
        const double t = (k == kScanPoints) ? t_max : k * step;
        const double r = rho(t);
        if (r < eta) {
            double lo = prev_t;
            double hi = t;
            while (hi - lo > 1e-3 * hi) {
                const double mid = 0.5 * (lo + hi);
                (rho(mid) < eta ? hi : lo) = mid;
            }
            result.time = hi;
            return result;
        }
        if (r > prev_rho) {
            result.non_monotone = true;
        }
        prev_t = t;
        prev_rho = r;
    }
    throw HorizonError(prev_rho, t_max);
}

ChannelStats channel_stats(const std::vector<double>& grid, double tau, double x0,
                           const EffectiveDiffusion& eff, std::optional<double> eta, double t_max) {
    ChannelStats stats;
    stats.t = grid;
    stats.mean.reserve(grid.size());
    stats.phi_diag.reserve(grid.size());
    stats.sigma2.reserve(grid.size());
    for (double t : grid) {
        stats.mean.push_back(mean_cir(t, tau, x0, eff));
        stats.phi_diag.push_back(acf_equal(t, tau, x0, eff));
        stats.sigma2.push_back(variance(t, tau, x0, eff));
    }
    if (eta) {
        stats.coherence_time = coherence_time(*eta, tau, x0, eff, t_max).time;
    }
    return stats;
}

}  // namespace mcchan
