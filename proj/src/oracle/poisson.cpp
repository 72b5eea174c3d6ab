#include "mcchan/oracle.hpp"

#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace mcchan::oracle {

namespace {

using Wide = boost::multiprecision::cpp_bin_float_50;

// Pr(N < xi) for xi = 0..xi_max, by summing e^{-lambda} lambda^w / w! term by term.
std::vector<Wide> cdf_table(double lambda, std::int64_t xi_max) {
    std::vector<Wide> below(static_cast<std::size_t>(xi_max) + 1);
    const Wide lam(lambda);
    Wide term = exp(-lam);
    Wide sum = 0;
    below[0] = 0;
    for (std::int64_t w = 0; w < xi_max; ++w) {
        sum += term;
        below[static_cast<std::size_t>(w) + 1] = sum;
        term *= lam / Wide(w + 1);
    }
    return below;
}

}  // namespace

double poisson_cdf_below(std::int64_t xi, double lambda) {
    if (xi <= 0) {
        return 0.0;
    }
    if (lambda < 0.0) {
        throw std::invalid_argument("lambda must be >= 0");
    }
    return static_cast<double>(cdf_table(lambda, xi).back());
}

std::int64_t brute_force_threshold(double lambda0, double lambda1, double p0, double p1,
                                   std::int64_t xi_max) {
    if (xi_max < 0) {
        throw std::invalid_argument("xi_max must be >= 0");
    }
    const std::vector<Wide> f0 = cdf_table(lambda0, xi_max);
    const std::vector<Wide> f1 = cdf_table(lambda1, xi_max);
    std::int64_t best = 0;
    Wide best_err = 2;
    for (std::int64_t xi = 0; xi <= xi_max; ++xi) {
        const auto k = static_cast<std::size_t>(xi);
        const Wide err = Wide(p0) * (1 - f0[k]) + Wide(p1) * f1[k];
        if (err < best_err) {
            best_err = err;
            best = xi;
        }
    }
    return best;
}

}  // namespace mcchan::oracle
