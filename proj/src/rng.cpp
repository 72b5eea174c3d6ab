#include "mcchan/rng.hpp"

#include <boost/random/poisson_distribution.hpp>

namespace mcchan {

namespace {

std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t tag) {
    auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
    auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
    std::seed_seq seq{lo(seed), hi(seed), lo(stream_id), hi(stream_id), lo(tag), hi(tag)};
    return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id, StreamTag tag)
    : seed_(seed),
      stream_id_(stream_id),
      engine_(seeded_engine(seed, stream_id, static_cast<std::uint64_t>(tag))) {}

std::int64_t RngStream::poisson(double mean) {
    if (!(mean > 0.0)) {
        return 0;
    }
    boost::random::poisson_distribution<std::int64_t, double> dist(mean);
    return dist(engine_);
}

}  // namespace mcchan
