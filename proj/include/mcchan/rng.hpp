#pragma once

#include <cstdint>
#include <random>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

namespace mcchan {

/// Sub-stream tags. A trial's draws for one purpose never overlap another's.
enum class StreamTag : std::uint64_t {
    Impulse = 1,
    Trajectory = 2,
    Bits = 3,
    Counts = 4,
    Noise = 5,
    Acf = 6,
    Molecules = 7,
};

/// Independent, reproducible random stream keyed by (seed, stream_id, tag).
/// Identical keys yield identical sequences on every platform; distinct keys
/// seed the engine through std::seed_seq so the streams do not overlap in
/// practice.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id, StreamTag tag = StreamTag::Impulse);

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] std::uint64_t stream_id() const noexcept { return stream_id_; }

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }
    bool bernoulli(double p) { return uniform() < p; }
    std::int64_t poisson(double mean);

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
    boost::random::normal_distribution<double> normal_;
    boost::random::uniform_01<double> uniform_;
};

}  // namespace mcchan
