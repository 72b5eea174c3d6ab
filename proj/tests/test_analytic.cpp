#include <cmath>
#include <random>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

#include "doctest.h"
#include "mcchan/analytic.hpp"
#include "mcchan/oracle.hpp"
#include "support.hpp"

using namespace mcchan;

namespace {

const PhysicalConfig kP = test::table1();
const EffectiveDiffusion kEff = derive_effective(kP);
const double kTau = kP.sampling_offset;
const double kX0 = kP.initial_distance;

EffectiveDiffusion eff_for(double d_tx) { return derive_effective(test::table1(d_tx)); }

}  // namespace

TEST_CASE("conditional response matches a direct long-double evaluation") {
    const double ref = test::reference_cir(1e-6, kTau, 5e-9, 1e-13, 0.15e-6);
    CHECK(test::rel_diff(cir_conditional(1e-6, kTau, kEff), ref) < 1e-13);
    // Printed reference value, rounded.
    CHECK(cir_conditional(1e-6, kTau, kEff) == doctest::Approx(1.0389e-3).epsilon(1e-4));
    CHECK(cir_conditional(0.0, kTau, kEff) ==
          doctest::Approx(kEff.volume / std::pow(4.0 * kPi * kEff.d1 * kTau, 1.5)).epsilon(1e-15));
    CHECK(cir_conditional(1e-3, kTau, kEff) == 0.0);
    CHECK(std::isfinite(log_cir_conditional(1e-3, kTau, kEff)));
}

TEST_CASE("conditional response rejects a degenerate delay or diffusion") {
    CHECK_THROWS_AS((void)cir_conditional(1e-6, 0.0, kEff), std::domain_error);
    EffectiveDiffusion frozen = kEff;
    frozen.d1 = 0.0;
    CHECK_THROWS_AS((void)cir_conditional(1e-6, kTau, frozen), std::domain_error);
}

TEST_CASE("unity flag trips for a large receiver observed early") {
    CHECK_FALSE(cir_exceeds_unity(kX0, kTau, kEff));
    EffectiveDiffusion big = kEff;
    big.volume = 4.0 / 3.0 * kPi * std::pow(5e-6, 3);
    CHECK(cir_exceeds_unity(0.0, 1e-6, big));
}

TEST_CASE("displacement density: peak, symmetry, normalisation") {
    const double t = 10e-3;
    const Vec3 r0{kX0, 0.0, 0.0};
    CHECK(displacement_pdf(r0, t, r0, kEff) ==
          doctest::Approx(std::pow(4.0 * kPi * kEff.d2 * t, -1.5)).epsilon(1e-14));
    const Vec3 d{1.3e-7, -0.4e-7, 2.2e-7};
    CHECK(displacement_pdf(r0 + d, t, r0, kEff) ==
          doctest::Approx(displacement_pdf(r0 - d, t, r0, kEff)).epsilon(1e-14));

    // Tensor Gauss-Legendre over +-9 standard deviations in scaled units.
    const double sd = std::sqrt(2.0 * kEff.d2 * t);
    using Rule = boost::math::quadrature::gauss<double, 40>;
    auto slab = [&](auto&& f) { return Rule::integrate(f, -9.0, 9.0); };
    const double total = slab([&](double x) {
        return slab([&](double y) {
            return slab([&](double z) {
                const Vec3 r{kX0 + sd * x, sd * y, sd * z};
                return displacement_pdf(r, t, r0, kEff) * sd * sd * sd;
            });
        });
    });
    CHECK(total == doctest::Approx(1.0).epsilon(1e-6));

    CHECK_THROWS_AS((void)displacement_pdf(r0, 0.0, r0, kEff), std::domain_error);
    EffectiveDiffusion still = kEff;
    still.d2 = 0.0;
    CHECK_THROWS_AS((void)displacement_pdf(r0, t, r0, still), std::domain_error);
}

TEST_CASE("mean response: boundary value, decrease, quadrature agreement") {
    CHECK(mean_cir(0.0, kTau, kX0, kEff) == cir_conditional(kX0, kTau, kEff));

    const EffectiveDiffusion fast = eff_for(100e-13);
    double prev = mean_cir(0.0, kTau, kX0, fast);
    for (int k = 1; k <= 25; ++k) {
        const double m = mean_cir(k * 1e-3, kTau, kX0, fast);
        CHECK(m < prev);
        prev = m;
    }

    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 8; ++k) {
        const double t = 50e-3 * u(gen);
        const double tau = 1e-5 + 2e-4 * u(gen);
        const double x0 = 0.3e-6 + 2e-6 * u(gen);
        const EffectiveDiffusion eff = eff_for(1e-13 + 99e-13 * u(gen));
        CAPTURE(t);
        CAPTURE(tau);
        CAPTURE(x0);
        CHECK(std::abs(std::expm1(log_mean_cir(t, tau, x0, eff) -
                                  oracle::log_mean_cir(t, tau, x0, eff))) < 1e-6);
    }
}

TEST_CASE("equal-time correlation") {
    const double h = cir_conditional(kX0, kTau, kEff);
    CHECK(acf_equal(0.0, kTau, kX0, kEff) == doctest::Approx(h * h).epsilon(1e-14));
    for (double t : {1e-3, 5e-3, 20e-3, 100e-3}) {
        const double m = mean_cir(t, kTau, kX0, kEff);
        CHECK(acf_equal(t, kTau, kX0, kEff) >= m * m);
    }
    CHECK(std::abs(std::expm1(log_acf_equal(5e-3, kTau, kX0, kEff) -
                              oracle::log_acf_equal(5e-3, kTau, kX0, kEff))) < 1e-6);
}

TEST_CASE("two-time correlation") {
    const double h = cir_conditional(kX0, kTau, kEff);
    SUBCASE("origin and t1 = 0 branch") {
        CHECK(acf(0.0, 0.0, kTau, kX0, kEff) == doctest::Approx(h * h).epsilon(1e-14));
        CHECK(acf(0.0, 7e-3, kTau, kX0, kEff) ==
              doctest::Approx(h * mean_cir(7e-3, kTau, kX0, kEff)).epsilon(1e-14));
    }
    SUBCASE("continuity at t2 -> t1") {
        for (double t1 : {0.5e-3, 5e-3, 30e-3}) {
            const double near = acf(t1, t1 * (1.0 + 1e-8), kTau, kX0, kEff);
            CHECK(test::rel_diff(near, acf_equal(t1, kTau, kX0, kEff)) < 1e-6);
        }
    }
    SUBCASE("quadrature agreement") {
        for (auto [t1, t2] : {std::pair{1e-3, 2e-3}, std::pair{5e-3, 10e-3}, std::pair{2e-3, 40e-3}}) {
            CHECK(std::abs(std::expm1(log_acf(t1, t2, kTau, kX0, kEff) -
                                      oracle::log_acf(t1, t2, kTau, kX0, kEff))) < 1e-6);
        }
    }
    SUBCASE("ordering of arguments is enforced") {
        CHECK_THROWS_AS((void)acf(2e-3, 1e-3, kTau, kX0, kEff), std::invalid_argument);
    }
    SUBCASE("the sign-flipped exponent is detectably wrong") {
        const double good = detail::log_acf_general(5e-3, 10e-3, kTau, kX0, kEff, 1.0);
        const double bad = detail::log_acf_general(5e-3, 10e-3, kTau, kX0, kEff, -1.0);
        CHECK(std::abs(good - log_acf(5e-3, 10e-3, kTau, kX0, kEff)) < 1e-12);
        CHECK(std::abs(bad - good) > 1e-3);
    }
}

TEST_CASE("variance") {
    CHECK(variance(0.0, kTau, kX0, kEff) == 0.0);
    for (double d_tx : {5e-13, 20e-13, 100e-13}) {
        const EffectiveDiffusion eff = eff_for(d_tx);
        double prev = 0.0;
        for (int k = 1; k <= 25; ++k) {
            const double t = k * 1e-3;
            const double m = mean_cir(t, kTau, kX0, eff);
            const double ratio = variance(t, kTau, kX0, eff) / (m * m);
            CHECK(ratio > prev);
            prev = ratio;
        }
    }
    const EffectiveDiffusion still = derive_effective(test::static_config());
    for (double t : {0.0, 1e-3, 1.0}) {
        CHECK(variance(t, kTau, kX0, still) == 0.0);
        CHECK(mean_cir(t, kTau, kX0, still) == cir_conditional(kX0, kTau, still));
    }
}

TEST_CASE("normalised correlation") {
    CHECK(normalized_acf(3e-3, 3e-3, kTau, kX0, kEff) == 1.0);
    double prev = 1.0;
    for (int k = 1; k <= 250; ++k) {
        const double rho = normalized_acf(0.0, k * 0.1e-3, kTau, kX0, kEff);
        CHECK(rho < prev);
        CHECK(rho > 0.0);
        prev = rho;
    }
    double slower = 1.0;
    for (double d_tx : {100e-13, 20e-13, 5e-13, 1e-13, 0.1e-13}) {
        const double rho = normalized_acf(0.0, 10e-3, kTau, kX0, eff_for(d_tx));
        CHECK(rho < 1.0);
        if (d_tx < 100e-13) {
            CHECK(rho > slower);
        }
        slower = rho;
    }
}

TEST_CASE("coherence time") {
    const double horizon = 100.0 * kP.bit_interval;
    const CoherenceResult r = coherence_time(0.9, kTau, kX0, kEff, horizon);
    CHECK(r.time == doctest::Approx(7e-3).epsilon(1e-3 / 7e-3));
    CHECK_FALSE(r.non_monotone);
    CHECK(normalized_acf(0.0, r.time, kTau, kX0, kEff) < 0.9);
    CHECK(normalized_acf(0.0, r.time * (1.0 - 2e-3), kTau, kX0, kEff) >= 0.9);

    // rho(0, t) depends on t only through D2 t.
    const EffectiveDiffusion slow = eff_for(5e-13);
    const CoherenceResult rs = coherence_time(0.9, kTau, kX0, slow, horizon);
    CHECK(rs.time * slow.d2 == doctest::Approx(r.time * kEff.d2).epsilon(3e-3));

    CHECK(coherence_time(0.999, kTau, kX0, kEff, horizon).time < r.time);
    const CoherenceResult tight = coherence_time(1.0 - 1e-12, kTau, kX0, kEff, horizon);
    CHECK(tight.time <= horizon / 1000.0);
    CHECK(tight.time > 0.0);

    CHECK_THROWS_AS((void)coherence_time(0.9, kTau, kX0, eff_for(0.1e-13), horizon), HorizonError);
    try {
        (void)coherence_time(0.9, kTau, kX0, eff_for(0.1e-13), horizon);
    } catch (const HorizonError& e) {
        CHECK(e.rho_at_horizon() >= 0.9);
    }
}

TEST_CASE("channel statistics bundle") {
    const ChannelStats s = channel_stats({0.0, 1e-3, 2e-3}, kTau, kX0, kEff, 0.9, 50e-3);
    REQUIRE(s.t.size() == 3);
    CHECK(s.mean[1] == mean_cir(1e-3, kTau, kX0, kEff));
    CHECK(s.phi_diag[2] == acf_equal(2e-3, kTau, kX0, kEff));
    CHECK(s.sigma2[0] == 0.0);
    REQUIRE(s.coherence_time.has_value());
    CHECK(*s.coherence_time == doctest::Approx(7.5e-3).epsilon(0.02));
}
