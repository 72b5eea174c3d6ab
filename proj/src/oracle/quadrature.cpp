#include "mcchan/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>

namespace mcchan::oracle {

namespace {

constexpr double kPiLocal = 3.14159265358979323846;

// Integrates f over the real line. The integrand is a product of Gaussians
// centred at `centres` with spreads `widths`; breakpoints are laid around every
// centre at several multiples of every width so each adaptive panel sees a
// smooth, well-scaled piece, and the range is cut at 40 widths from the
// outermost centre.
double integrate_line(const std::function<double(double)>& f, std::initializer_list<double> centres,
                      std::initializer_list<double> widths) {
    double wmax = 0.0;
    for (double w : widths) {
        wmax = std::max(wmax, w);
    }
    std::vector<double> pts;
    for (double c : centres) {
        pts.push_back(c);
        for (double w : widths) {
            if (w <= 0.0) {
                continue;
            }
            for (double k : {0.5, 2.0, 5.0, 12.0, 40.0}) {
                pts.push_back(c - k * w);
                pts.push_back(c + k * w);
            }
        }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const double lo = *std::min_element(centres.begin(), centres.end()) - 40.0 * wmax;
    const double hi = *std::max_element(centres.begin(), centres.end()) + 40.0 * wmax;

    std::vector<double> edges{lo};
    for (double p : pts) {
        if (p > edges.back() && p < hi) {
            edges.push_back(p);
        }
    }
    edges.push_back(hi);

    // Each panel is mapped onto [-1, 1]: this Boost release compares the
    // unit-interval error estimate against a tolerance in caller units, so
    // short physical panels would otherwise never terminate.
    using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;
    auto panel = [&](std::size_t i, unsigned depth) {
        const double mid = 0.5 * (edges[i] + edges[i + 1]);
        const double half = 0.5 * (edges[i + 1] - edges[i]);
        auto g = [&](double s) { return f(mid + half * s); };
        return half * Rule::integrate(g, -1.0, 1.0, depth, 1e-9);
    };

    // A coarse pass sizes the integral; panels below 1e-15 of it keep their
    // coarse value, the rest are refined until the Kronrod/Gauss gap is 1e-9
    // relative, which leaves the Kronrod value far more accurate than that.
    std::vector<double> coarse(edges.size() - 1);
    double scale = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        coarse[i] = panel(i, 0);
        scale += std::abs(coarse[i]);
    }
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        total += std::abs(coarse[i]) < 1e-15 * scale ? coarse[i] : panel(i, 10);
    }
    return total;
}

// argmax of g on [a, b] (g concave there).
double argmax_on(const std::function<double(double)>& g, double a, double b) {
    if (a == b) {
        return a;
    }
    if (a > b) {
        std::swap(a, b);
    }
    const auto r = boost::math::tools::brent_find_minima([&](double x) { return -g(x); }, a, b,
                                                          std::numeric_limits<double>::digits / 2);
    // Brent's bracket tolerance is ~sqrt(eps); the shift only has to be close.
    return r.first;
}

double log_point_cir(double distance, double tau, const EffectiveDiffusion& eff) {
    return std::log(eff.volume) - 1.5 * std::log(4.0 * kPiLocal * eff.d1 * tau) -
           distance * distance / (4.0 * eff.d1 * tau);
}

void require_inputs(double tau, const EffectiveDiffusion& eff) {
    if (!(tau > 0.0) || !(eff.d1 > 0.0)) {
        throw std::domain_error("oracle needs tau > 0 and D1 > 0");
    }
}

// log int_{R^3} exp(-a |r|^2 - b |r - [x0,0,0]|^2) dr. The integrand factorises
// over Cartesian axes, so it is the product of three 1-D quadratures.
double log_gaussian_product_3d(double a, double b, double x0) {
    auto log_axis = [=](double c) {
        auto exponent = [=](double x) { return -a * x * x - b * (x - c) * (x - c); };
        const double peak = argmax_on(exponent, 0.0, c);
        const double shift = exponent(peak);
        const double value =
            integrate_line([&](double x) { return std::exp(exponent(x) - shift); }, {0.0, c, peak},
                           {std::sqrt(0.5 / a), std::sqrt(0.5 / b)});
        return shift + std::log(value);
    };
    return log_axis(x0) + 2.0 * log_axis(0.0);
}

// log int_{R^2} exp(-a u^2 - a v^2 - b1 (u - c)^2 - bd (v - u)^2) du dv,
// outer u, inner v.
double log_gaussian_chain_2d(double a, double b1, double bd, double c) {
    auto exponent = [=](double u, double v) {
        return -a * u * u - a * v * v - b1 * (u - c) * (u - c) - bd * (v - u) * (v - u);
    };
    // Vertex of the quadratic in v.
    auto inner_peak = [=](double u) { return bd * u / (a + bd); };
    auto profile = [&](double u) { return exponent(u, inner_peak(u)); };
    const double outer_peak = argmax_on(profile, 0.0, c);
    const double shift = profile(outer_peak);
    const double wa = std::sqrt(0.5 / a);
    const double w1 = std::sqrt(0.5 / b1);
    const double wd = std::sqrt(0.5 / bd);
    const double value = integrate_line(
        [&](double u) {
            const double vp = inner_peak(u);
            return integrate_line([&](double v) { return std::exp(exponent(u, v) - shift); },
                                  {0.0, u, vp}, {wa, wd});
        },
        {0.0, c, outer_peak}, {wa, w1, wd});
    return shift + std::log(value);
}

}  // namespace

double log_mean_cir(double t, double tau, double x0, const EffectiveDiffusion& eff) {
    require_inputs(tau, eff);
    if (t == 0.0 || eff.d2 == 0.0) {
        return log_point_cir(x0, tau, eff);
    }
    const double a = 1.0 / (4.0 * eff.d1 * tau);
    const double b = 1.0 / (4.0 * eff.d2 * t);
    return std::log(eff.volume) - 1.5 * std::log(4.0 * kPiLocal * eff.d1 * tau) -
           1.5 * std::log(4.0 * kPiLocal * eff.d2 * t) + log_gaussian_product_3d(a, b, x0);
}

double log_acf_equal(double t, double tau, double x0, const EffectiveDiffusion& eff) {
    require_inputs(tau, eff);
    if (t == 0.0 || eff.d2 == 0.0) {
        return 2.0 * log_point_cir(x0, tau, eff);
    }
    const double a = 2.0 / (4.0 * eff.d1 * tau);
    const double b = 1.0 / (4.0 * eff.d2 * t);
    return 2.0 * (std::log(eff.volume) - 1.5 * std::log(4.0 * kPiLocal * eff.d1 * tau)) -
           1.5 * std::log(4.0 * kPiLocal * eff.d2 * t) + log_gaussian_product_3d(a, b, x0);
}

double log_acf(double t1, double t2, double tau, double x0, const EffectiveDiffusion& eff) {
    require_inputs(tau, eff);
    if (t2 < t1 || t1 < 0.0) {
        throw std::invalid_argument("oracle acf needs 0 <= t1 <= t2");
    }
    if (eff.d2 == 0.0) {
        return 2.0 * log_point_cir(x0, tau, eff);
    }
    if (t1 == t2) {
        return log_acf_equal(t1, tau, x0, eff);
    }
    if (t1 == 0.0) {
        return log_point_cir(x0, tau, eff) + log_mean_cir(t2, tau, x0, eff);
    }
    const double a = 1.0 / (4.0 * eff.d1 * tau);
    const double b1 = 1.0 / (4.0 * eff.d2 * t1);
    const double bd = 1.0 / (4.0 * eff.d2 * (t2 - t1));
    const double prefactor = 2.0 * (std::log(eff.volume) - 1.5 * std::log(4.0 * kPiLocal * eff.d1 * tau)) -
                             1.5 * std::log(4.0 * kPiLocal * eff.d2 * t1) -
                             1.5 * std::log(4.0 * kPiLocal * eff.d2 * (t2 - t1));
    return prefactor + log_gaussian_chain_2d(a, b1, bd, x0) + log_gaussian_chain_2d(a, b1, bd, 0.0) +
           log_gaussian_chain_2d(a, b1, bd, 0.0);
}

}  // namespace mcchan::oracle
