// Acceptance run: one PASS/FAIL line per criterion with the measured values.
//
//   acceptance [--quick] [--only C4] [--expect-fail C1 ...]
//
// Exit status is 0 when the set of failing criteria equals the --expect-fail
// set, so a documented deviation stays visible without masking regressions,
// and an unexpected pass is reported too.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mcchan/analytic.hpp"
#include "mcchan/ber.hpp"
#include "mcchan/brownian.hpp"
#include "mcchan/config_io.hpp"
#include "mcchan/detection.hpp"
#include "mcchan/experiments.hpp"
#include "mcchan/oracle.hpp"
#include "mcchan/rng.hpp"

using namespace mcchan;

namespace {

struct Outcome {
    bool passed = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        passed = passed && ok;
        detail += (detail.empty() ? "" : "; ") + what + (ok ? "" : " [x]");
    }
};

std::string fmt(const char* f, double a) {
    char buf[96];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char* f, double a, double b) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

PhysicalConfig table1(double d_tx) {
    PhysicalConfig p;
    p.diffusion_tx = d_tx;
    return p;
}

// Direct long-double point response, independent of the library.
double reference_cir(double r, double tau, double d1, double a) {
    const long double pi = 3.141592653589793238462643383279502884L;
    const long double vol = 4.0L / 3.0L * pi * a * a * a;
    return static_cast<double>(vol / std::pow(4.0L * pi * d1 * tau, 1.5L) *
                               std::exp(-static_cast<long double>(r) * r / (4.0L * d1 * tau)));
}

std::vector<double> ranks(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) {
            ++j;
        }
        for (std::size_t k = i; k <= j; ++k) {
            r[idx[k]] = 0.5 * static_cast<double>(i + j);
        }
        i = j + 1;
    }
    return r;
}

double spearman_vs_index(const std::vector<double>& v) {
    const std::vector<double> rv = ranks(v);
    std::vector<double> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0.0);
    const double n = static_cast<double>(v.size());
    const double mean = (n - 1.0) / 2.0;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        sxy += (rv[i] - mean) * (idx[i] - mean);
        sxx += (rv[i] - mean) * (rv[i] - mean);
        syy += (idx[i] - mean) * (idx[i] - mean);
    }
    return sxy / std::sqrt(sxx * syy);
}

std::vector<double> moving_average(const std::vector<double>& v, int half) {
    std::vector<double> out(v.size());
    const auto n = static_cast<int>(v.size());
    for (int i = 0; i < n; ++i) {
        const int lo = std::max(0, i - half);
        const int hi = std::min(n - 1, i + half);
        double s = 0.0;
        for (int k = lo; k <= hi; ++k) {
            s += v[static_cast<std::size_t>(k)];
        }
        out[static_cast<std::size_t>(i)] = s / (hi - lo + 1);
    }
    return out;
}

// 1. Coherence time at eta = 0.9.
Outcome c1(bool) {
    Outcome o;
    for (auto [d_tx, target] : {std::pair{20e-13, 7e-3}, std::pair{5e-13, 23e-3}}) {
        const PhysicalConfig p = table1(d_tx);
        const double tc = coherence_time(0.9, p.sampling_offset, p.initial_distance,
                                         derive_effective(p), 100.0 * p.bit_interval)
                              .time;
        o.require(std::abs(tc - target) <= 1e-3,
                  fmt("D_tx=%.0e: T_c=%.2f ms (target %.0f +- 1 ms)", d_tx, tc * 1e3, target * 1e3));
    }
    return o;
}

// 2. Mean response against quadrature on 20 random draws.
Outcome c2(bool) {
    Outcome o;
    RngStream rng(2024, 0, StreamTag::Acf);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        const double t = 100e-3 * rng.uniform();
        const double tau = 5e-6 + 0.5e-3 * rng.uniform();
        const double x0 = 0.2e-6 + 3e-6 * rng.uniform();
        PhysicalConfig p = table1(0.1e-13 + 200e-13 * rng.uniform());
        p.diffusion_rx = 2e-13 * rng.uniform();
        const EffectiveDiffusion eff = derive_effective(p);
        worst = std::max(worst, std::abs(std::expm1(log_mean_cir(t, tau, x0, eff) -
                                                    oracle::log_mean_cir(t, tau, x0, eff))));
    }
    o.require(worst <= 1e-6, fmt("max relative deviation %.2e (tol 1e-6)", worst));
    return o;
}

// 3. Two-time correlation against the trajectory Monte Carlo.
Outcome c3(bool quick) {
    Outcome o;
    const PhysicalConfig p = table1(20e-13);
    const EffectiveDiffusion eff = derive_effective(p);
    const double tau = p.sampling_offset;
    const double x0 = p.initial_distance;
    const std::int64_t trials = quick ? 20'000 : 100'000;
    const std::pair<double, double> pairs[] = {
        {0.0, 0.0},   {0.0, 5e-3},  {0.0, 20e-3},   {1e-3, 2e-3},          {5e-3, 10e-3},
        {5e-3, 5e-3}, {2e-3, 30e-3}, {10e-3, 12e-3}, {8e-3, 8e-3 * (1.0 + 1e-8)}, {20e-3, 45e-3}};
    double worst = 0.0;
    for (const auto& [t1, t2] : pairs) {
        const Estimate e = empirical_acf(p, t1, t2, tau, trials);
        const double phi = acf(t1, t2, tau, x0, eff);
        const double z = e.std_error > 0.0 ? std::abs(e.mean - phi) / e.std_error
                                           : (std::abs(e.mean - phi) <= 1e-12 * phi ? 0.0 : 1e9);
        worst = std::max(worst, z);
    }
    o.require(worst <= 3.0, fmt("10 pairs, %.0f trials each, max |dev| = %.2f se (tol 3)",
                                static_cast<double>(trials), worst));
    return o;
}

// 4. Particle simulation against the mean response.
Outcome c4(bool quick) {
    Outcome o;
    PhysicalConfig p = table1(20e-13);
    p.trials = quick ? 500 : 10'000;
    const EffectiveDiffusion eff = derive_effective(p);
    const double n_a = static_cast<double>(p.molecules_per_bit);
    for (double t : {0.0, 5e-3, 10e-3, 20e-3}) {
        const Estimate e = estimate_impulse(p, t, p.sampling_offset, p.trials);
        const double m = mean_cir(t, p.sampling_offset, p.initial_distance, eff);
        const double z = std::abs(e.mean - m) / e.std_error;
        o.require(z <= 3.0, fmt("t=%2.0f ms: sim %.3f vs %.3f", t * 1e3, n_a * e.mean, n_a * m) +
                                fmt(" (%.2f se)", z));
    }
    const double ref = n_a * reference_cir(p.initial_distance, p.sampling_offset, eff.d1,
                                           p.receiver_radius);
    const double lib = n_a * mean_cir(0.0, p.sampling_offset, p.initial_distance, eff);
    o.require(std::abs(lib - 31.2) <= 0.1 && std::abs(lib - ref) <= 1e-9 * ref,
              fmt("N_A m(0)=%.4f, direct evaluation %.4f (target 31.2 +- 0.1)", lib, ref));
    return o;
}

// 5. Threshold rule against exhaustive search.
Outcome c5(bool) {
    Outcome o;
    RngStream rng(55, 0, StreamTag::Bits);
    int mismatches = 0;
    for (int k = 0; k < 50;) {
        const double a = 0.1 * std::pow(1000.0, rng.uniform());
        const double b = 0.1 * std::pow(1000.0, rng.uniform());
        const double p0 = 0.02 + 0.96 * rng.uniform();
        const double l0 = std::min(a, b);
        const double l1 = std::max(a, b);
        if (l1 < 1.2 * l0) {
            continue;  // optimum beyond 50-digit resolution of the objective
        }
        ++k;
        mismatches += optimal_threshold({.lambda1 = l1, .lambda0 = l0}, p0, 1.0 - p0) ==
                              oracle::brute_force_threshold(l0, l1, p0, 1.0 - p0, 400)
                          ? 0
                          : 1;
    }
    o.require(mismatches == 0, fmt("%.0f of 50 triples differ", mismatches));
    return o;
}

// 6. Error-curve structure.
Outcome c6(bool quick) {
    Outcome o;
    const std::int64_t trials = quick ? 2000 : 10'000;
    const std::uint64_t seed = 1;

    PhysicalConfig still = table1(0.0);
    still.diffusion_rx = 0.0;
    const BerCurve s = ber_curve(still, trials, seed);
    const bool identical = std::all_of(s.records.begin(), s.records.end(), [](const BerRecord& r) {
        return r.pe_perfect == r.pe_outdated;
    });
    o.require(identical, fmt("(a) static: perfect == outdated at all j (mean pe %.4f)", s.mean_perfect));

    for (double d_tx : {5e-13, 20e-13}) {
        const BerCurve c = ber_curve(table1(d_tx), trials, seed);
        std::vector<double> pp;
        std::vector<double> po;
        for (const BerRecord& r : c.records) {
            pp.push_back(r.pe_perfect);
            po.push_back(r.pe_outdated);
        }
        const double rp = spearman_vs_index(moving_average(pp, 4));
        const double ro = spearman_vs_index(moving_average(po, 4));
        o.require(rp > 0.9 && ro > 0.9,
                  fmt("(b) D_tx=%.0e trend: Spearman perfect %.3f, outdated %.3f", d_tx, rp, ro));
    }

    std::vector<double> gaps;
    for (double d_tx : {0.1e-13, 5e-13, 20e-13, 100e-13}) {
        gaps.push_back(ber_curve(table1(d_tx), trials, seed).records[36].gap);
    }
    const bool increasing = gaps[0] < gaps[1] && gaps[1] < gaps[2] && gaps[2] < gaps[3];
    o.require(increasing, fmt("(c) gap@37 = %.4f, %.4f, %.4f", gaps[0], gaps[1], gaps[2]) +
                              fmt(", %.4f strictly increasing", gaps[3]));
    o.require(std::abs(gaps[1] - 0.0212) <= 0.5 * 0.0212,
              fmt("gap@37 D_tx=5e-13: %.4f vs 0.0212 +- 50%%", gaps[1]));
    o.require(std::abs(gaps[2] - 0.0624) <= 0.5 * 0.0624,
              fmt("gap@37 D_tx=20e-13: %.4f vs 0.0624 +- 50%%", gaps[2]));
    return o;
}

// 7. Byte-identical output regardless of the worker count.
Outcome c7(bool quick) {
    Outcome o;
    ExperimentConfig config = parse_config_text("D_tx = 20e-13\n");
    config.physical.trials = quick ? 300 : 2000;
    config.mean_t_max = 10e-3;
    config.mean_t_step = 5e-3;
    auto render = [&](const char* threads, bool sim) {
        ::setenv("MCCHAN_THREADS", threads, 1);
        std::ostringstream out;
        cmd_ber(config, out);
        if (sim) {
            ExperimentConfig m = config;
            m.with_sim = true;
            m.physical.molecules_per_bit = 3000;
            m.physical.trials = 200;
            cmd_mean(m, out);
        }
        return out.str();
    };
    const std::string one = render("1", true);
    const std::string four = render("4", true);
    const std::string again = render("4", true);
    ::unsetenv("MCCHAN_THREADS");
    o.require(one == four, fmt("1 vs 4 workers: %.0f bytes each, identical", static_cast<double>(one.size())));
    o.require(four == again, "repeat run identical");
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    bool quick = false;
    std::set<std::string> expected;
    std::set<std::string> only;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--quick") {
            quick = true;
        } else if (arg == "--expect-fail" && i + 1 < argc) {
            expected.insert(argv[++i]);
        } else if (arg == "--only" && i + 1 < argc) {
            only.insert(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: acceptance [--quick] [--only Cn] [--expect-fail Cn]\n");
            return 2;
        }
    }
    const std::vector<std::pair<std::string, std::function<Outcome(bool)>>> criteria = {
        {"C1", c1}, {"C2", c2}, {"C3", c3}, {"C4", c4}, {"C5", c5}, {"C6", c6}, {"C7", c7}};
    const char* names[] = {"coherence time",          "mean vs quadrature",  "correlation vs Monte Carlo",
                           "particle sim vs mean",    "threshold optimality", "error-curve structure",
                           "determinism"};
    std::set<std::string> failed;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const auto& [id, fn] = criteria[k];
        if (!only.empty() && !only.contains(id)) {
            continue;
        }
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = fn(quick);
        } catch (const std::exception& e) {
            out.passed = false;
            out.detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!out.passed) {
            failed.insert(id);
        }
        const char* note = expected.contains(id) ? (out.passed ? " (expected to fail)" : " (known deviation)") : "";
        std::printf("%s %s %s: %s [%.1f s]%s\n", out.passed ? "PASS" : "FAIL", id.c_str(), names[k],
                    out.detail.c_str(), secs, note);
        std::fflush(stdout);
    }
    std::set<std::string> expected_run;
    for (const auto& id : expected) {
        if (only.empty() || only.contains(id)) {
            expected_run.insert(id);
        }
    }
    return failed == expected_run ? 0 : 1;
}
