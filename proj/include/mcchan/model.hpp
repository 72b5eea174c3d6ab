#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mcchan {

inline constexpr double kPi = 3.14159265358979323846;

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3& operator+=(const Vec3& o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    constexpr Vec3& operator-=(const Vec3& o) {
        x -= o.x;
        y -= o.y;
        z -= o.z;
        return *this;
    }
    [[nodiscard]] constexpr double norm2() const { return x * x + y * y + z * z; }
    [[nodiscard]] double norm() const { return std::sqrt(norm2()); }
    [[nodiscard]] bool finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }

    friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
    friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
    friend constexpr Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
    friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

/// Physical and protocol parameters of the mobile link, SI units throughout.
///
/// Defaults reproduce the reference scenario: N_A = 30000, D_A = 5e-9 m^2/s,
/// D_rx = 1e-13 m^2/s, r_0 = 1 um, a_rx = 0.15 um, n_A = 10, T = 0.5 ms,
/// tau_s = 0.035 ms, L = 50, P1 = 0.5, dt = 5 us. The transmitter
/// coefficient is the swept parameter; its default sits in the middle of
/// the sweep.
struct PhysicalConfig {
    double diffusion_molecule = 5e-9;       // D_A
    double diffusion_tx = 20e-13;           // D_tx
    double diffusion_rx = 1e-13;            // D_rx
    double receiver_radius = 0.15e-6;       // a_rx
    double initial_distance = 1e-6;         // r_0 = x_0
    std::int64_t molecules_per_bit = 30000; // N_A
    double noise_mean = 10.0;               // mean noise molecules inside the receiver
    double bit_interval = 0.5e-3;           // T
    double sampling_offset = 0.035e-3;      // tau_s
    int sequence_length = 50;               // L
    double prob_one = 0.5;                  // P1
    double time_step = 5e-6;                // dt
    std::int64_t trials = 10000;
    std::uint64_t seed = 1;

    [[nodiscard]] double prob_zero() const { return 1.0 - prob_one; }
};

/// Raised when a configuration violates its invariants. `field()` is the
/// configuration key of the offending parameter.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
    [[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Throws ConfigError on the first invariant violation.
void validate(const PhysicalConfig& config);

/// True when `duration` is an integer multiple of `step` (relative slack 1e-9).
[[nodiscard]] bool is_step_multiple(double duration, double step);

/// Number of `step`s in `duration`; requires is_step_multiple.
[[nodiscard]] std::int64_t step_count(double duration, double step);

struct EffectiveDiffusion {
    double d1 = 0.0;     // molecule relative to receiver: D_A + D_rx
    double d2 = 0.0;     // receiver relative to transmitter: D_rx + D_tx
    double volume = 0.0; // receiver volume (4/3) pi a_rx^3
};

[[nodiscard]] EffectiveDiffusion derive_effective(const PhysicalConfig& config);

/// Transmitted or decided bits b_1..b_L, stored 0-based (bits[j - 1] = b_j).
using BitSequence = std::vector<std::uint8_t>;

/// Relative Tx-Rx position r(kT) at the start of every bit interval,
/// samples[k] for k = 0..L-1; samples[0] = [x0, 0, 0].
struct RelativeTrajectory {
    std::vector<Vec3> samples;
    double step = 0.0;
};

}  // namespace mcchan
