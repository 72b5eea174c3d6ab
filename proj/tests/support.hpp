#pragma once

#include <cmath>

#include "mcchan/model.hpp"

// Shared fixtures for the unit tests.

namespace mcchan::test {

inline PhysicalConfig table1(double d_tx = 20e-13) {
    PhysicalConfig p;
    p.diffusion_tx = d_tx;
    return p;
}

inline PhysicalConfig static_config() {
    PhysicalConfig p;
    p.diffusion_tx = 0.0;
    p.diffusion_rx = 0.0;
    return p;
}

// Point-observer response evaluated directly in long double, sharing no code
// with the library.
inline double reference_cir(double r, double tau, double d_a, double d_rx, double a) {
    const long double pi = 3.141592653589793238462643383279502884L;
    const long double d1 = static_cast<long double>(d_a) + d_rx;
    const long double vol = 4.0L / 3.0L * pi * a * a * a;
    const long double den = std::pow(4.0L * pi * d1 * tau, 1.5L);
    return static_cast<double>(vol / den * std::exp(-static_cast<long double>(r) * r / (4.0L * d1 * tau)));
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace mcchan::test
