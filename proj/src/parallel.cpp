#include "mcchan/parallel.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace mcchan {

std::size_t worker_count() {
    if (const char* env = std::getenv("MCCHAN_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) {
                return static_cast<std::size_t>(v);
            }
        } catch (const std::exception&) {
            // fall through to the machine default
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

Estimate estimate(std::span<const double> samples) {
    Estimate e;
    e.count = samples.size();
    if (samples.empty()) {
        return e;
    }
    CompensatedSum sum;
    for (double v : samples) {
        sum.add(v);
    }
    e.mean = sum.value() / static_cast<double>(e.count);
    if (e.count > 1) {
        CompensatedSum sq;
        for (double v : samples) {
            const double d = v - e.mean;
            sq.add(d * d);
        }
        const double var = sq.value() / static_cast<double>(e.count - 1);
        e.std_error = std::sqrt(var / static_cast<double>(e.count));
    }
    return e;
}

}  // namespace mcchan
